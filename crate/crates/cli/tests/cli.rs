use std::path::{Path, PathBuf};
use std::process::Command;

use moment_forge::moment::MomentSequence;
use moment_forge::poly::ApproxPoly;
use moment_forge::solver::{generate_moments, AtomicMeasure};
use moment_forge::Complex64;
use moment_forge_cli::{exit_code, resolve_tol, ProblemFile, Value};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_moment-forge")).args(args).env_remove("MOMENT_FORGE_TOL").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn q7_roots() -> Vec<Complex64> {
    let r = 1.5f64.sqrt();
    [(-2.0, -1.0), (-r, -r), (-1.0, -2.0), (0.0, 0.0), (1.0, 2.0), (r, r), (2.0, 1.0)].iter().map(|&(x, y)| Complex64::new(x, y)).collect()
}

/// The q7 moment file, generated through the CLI.
fn q7_moments(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("q7.txt");
    let (code, _, err) = run(&["generate", fixture("q7_atoms.txt").to_str().unwrap(), "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    path
}

fn csv(text: &str) -> Vec<[f64; 5]> {
    text.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .collect()
}

#[test]
fn problem_files_survive_a_round_trip() {
    let dir = TempDir::new().unwrap();
    for path in [fixture("q7_atoms.txt"), fixture("origin.txt"), fixture("wilmshurst.txt"), q7_moments(&dir)] {
        let first = ProblemFile::read(&path).unwrap();
        let second: ProblemFile = first.serialize().parse().unwrap();
        assert_eq!(first, second, "{}", path.display());
        assert_eq!(first.serialize(), second.serialize());
    }
    let text = "k = 2\ntol = 1e-7\npolynomial = (1/2+1/3i)zw - 0.1z\nmoments[0].i = 0\nmoments[0].j = 0\nmoments[0].re = 7/3\nmoments[1].i = 1\nmoments[1].j = 3\nmoments[1].re = 0.1\nmoments[1].im = -123456789/1000000007\n";
    let p: ProblemFile = text.parse().unwrap();
    assert_eq!(p.moments[1].re, Value::Float(0.1));
    assert_eq!(p.serialize().parse::<ProblemFile>().unwrap(), p);
}

#[test]
fn generation_mode_file_gives_the_q7_moments() {
    let atoms = ProblemFile::read(&fixture("q7_atoms.txt")).unwrap();
    assert_eq!(atoms.atoms.len(), 7);
    let dir = TempDir::new().unwrap();
    let gamma: MomentSequence<Complex64> = ProblemFile::read(&q7_moments(&dir)).unwrap().moments().unwrap();
    let mu = AtomicMeasure::new(q7_roots().into_iter().map(|z| (z, Complex64::new(1.0, 0.0)))).unwrap();
    assert_eq!(gamma, generate_moments(&mu, 3).unwrap());
}

#[test]
fn unit_mass_at_the_origin() {
    let p = ProblemFile::read(&fixture("origin.txt")).unwrap();
    let gamma: MomentSequence<moment_forge::GaussianRational> = p.moments().unwrap();
    assert_eq!(gamma.entries().len(), 6);
    let (code, out, _) = run(&["check", fixture("origin.txt").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("1 atoms\n  z = 0  density = 1\n"), "{out}");
}

#[test]
fn missing_moment_is_reported() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("gap.txt");
    let mut text = String::from("k = 1\n");
    for (n, (i, j)) in [(0, 0), (0, 1), (0, 2)].iter().enumerate() {
        text.push_str(&format!("moments[{n}].i = {i}\nmoments[{n}].j = {j}\nmoments[{n}].re = {}\n", if n == 0 { 1 } else { 0 }));
    }
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = run(&["matrix", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(err.trim(), "moment: missing moment (1,1)");
}

#[test]
fn schema_errors_name_field_and_index() {
    let cases = [
        ("k = 1\nmoments[0].i = 0\nmoments[0].re = 1\n", "cli: moments[0].j missing"),
        ("k = 1\nmoments[0].i = 0\nmoments[0].j = 0\nmoments[0].re = x\n", "cli: line 4: moments[0].re: invalid number `x`"),
        ("k = 1\nmoments[0].i = 2\nmoments[0].j = 1\nmoments[0].re = 1\n", "cli: moments[0]: index (2,1) exceeds 2k = 2"),
        ("k = 1\nmoments[0].i = 0\nmoments[0].j = 0\nmoments[0].re = 1\natoms[0].z_re = 0\natoms[0].density = 1\n", "cli: a problem gives either moments or atoms, not both"),
        ("k = 1\nmoment[0].i = 0\n", "cli: line 2: unknown key `moment[0].i`"),
        ("k = 1\natoms[0].z_re = 0\natoms[0].mass = 1\n", "cli: line 3: atoms[0]: unknown field `mass`"),
    ];
    for (text, msg) in cases {
        let err = match text.parse::<ProblemFile>() {
            Err(e) => e,
            Ok(p) => p.moments::<Complex64>().unwrap_err(),
        };
        assert_eq!(err.to_string(), msg);
    }
}

#[test]
fn asymmetric_duplicates_are_rejected_and_consistent_ones_accepted() {
    let base = "k = 1\nimplicit_zero = true\nmoments[0].i = 0\nmoments[0].j = 0\nmoments[0].re = 2\nmoments[1].i = 0\nmoments[1].j = 1\nmoments[1].re = 1\nmoments[1].im = 1\nmoments[2].i = 1\nmoments[2].j = 0\nmoments[2].re = 1\n";
    let bad: ProblemFile = format!("{base}moments[2].im = 1\n").parse().unwrap();
    assert_eq!(
        bad.moments::<Complex64>().unwrap_err().to_string(),
        "cli: moments[1] and moments[2]: asymmetric duplicate entries (0,1) and (1,0)"
    );
    let good: ProblemFile = format!("{base}moments[2].im = -1\n").parse().unwrap();
    assert_eq!(*good.moments::<Complex64>().unwrap().get(1, 0), Complex64::new(1.0, -1.0));
}

#[test]
fn check_on_the_q7_instance_says_yes() {
    let dir = TempDir::new().unwrap();
    let path = q7_moments(&dir);
    let (code, out, err) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.starts_with("verdict: yes\n"));
    assert!(out.contains("basis (3 elements, floating point):"), "{out}");

    let (code, out, _) = run(&["check", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"verdict = yes") && lines.contains(&"rank = 7") && lines.contains(&"nullity = 3"));
    let basis: Vec<ApproxPoly> = lines.iter().filter_map(|l| l.strip_prefix("basis[")).map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(basis.len(), 3);
    for expected in ["z^3 - 8iz - 5w", "w^3 + 8iw - 5z", "iz^2w + zw^2 - 5iz - 5w"] {
        let e = expected.parse::<ApproxPoly>().unwrap().monic();
        assert!(basis.iter().any(|g| g.max_coeff_distance(&e) < 1e-9), "missing {expected}");
    }
}

#[test]
fn check_on_a_perturbed_instance_says_no() {
    let dir = TempDir::new().unwrap();
    let mut p = ProblemFile::read(&q7_moments(&dir)).unwrap();
    let entry = p.moments.iter_mut().find(|m| (m.i, m.j) == (2, 2)).unwrap();
    let Value::Float(x) = entry.re else { panic!("float moments expected") };
    entry.re = Value::Float(x + 0.1);
    let path = dir.path().join("bumped.txt");
    std::fs::write(&path, p.serialize()).unwrap();
    let (code, out, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(out.starts_with("verdict: no\n"));
    assert!(out.contains("condition (2): fail"));
}

#[test]
fn exact_moments_are_checked_exactly() {
    let dir = TempDir::new().unwrap();
    let atoms = dir.path().join("atoms.txt");
    std::fs::write(&atoms, "k = 2\npolynomial = z^2 - z\natoms[0].z_re = 0\natoms[0].density = 1/2\natoms[1].z_re = 1\natoms[1].density = 3\n").unwrap();
    let moments = dir.path().join("moments.txt");
    assert_eq!(run(&["generate", atoms.to_str().unwrap(), "--output", moments.to_str().unwrap()]).0, 0);
    let p = ProblemFile::read(&moments).unwrap();
    assert!(p.is_exact());
    assert_eq!(p.moments[0].re, Value::Exact(num_rational::BigRational::new(7.into(), 2.into())));
    let (code, report, _) = run(&["check", moments.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("basis (4 elements, exact):") || report.contains("elements, exact):"), "{report}");
    assert!(report.contains("  z = 0  density = 1/2\n  z = 1  density = 3\n"), "{report}");
}

#[test]
fn conditions_for_the_wilmshurst_curve_are_stable() {
    let (code, out, _) = run(&["conditions", fixture("wilmshurst.txt").to_str().unwrap()]);
    assert_eq!(code, 0);
    let expected = "\
g1 = w^3 + 3/2w^2 + 1/2z
  Λ(g1): γ01 + 3·γ20 + 2·γ30 = 0
  Λ(z·g1): γ02 + 3·γ21 + 2·γ31 = 0
g2 = z^2w - zw^2 + 1/2z^2 - 1/2w^2 - 1/4z + 1/4w
  Λ(g2): 2i·Im(γ10) - 4i·Im(γ20) - 8i·Im(γ21) = 0
  Λ(z·g2): -γ02 + γ11 + 2·γ03 - 2·γ21 + 4·γ13 - 4·γ22 = 0
g3 = z^3 + 3/2z^2 + 1/2w
  Λ(g3): γ10 + 3·γ02 + 2·γ03 = 0
  Λ(z·g3): γ11 + 3·γ03 + 2·γ04 = 0
";
    assert_eq!(out, expected);
    assert_eq!(run(&["conditions", fixture("wilmshurst.txt").to_str().unwrap()]).1, out);
}

#[test]
fn groebner_and_variety_on_the_wilmshurst_curve() {
    let path = fixture("wilmshurst.txt");
    let (code, out, _) = run(&["groebner", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("3 elements, exact\n"));
    assert!(out.contains("g2 = 4z^2w - 4zw^2 + 2z^2 - 2w^2 - z + w\n"));
    assert!(out.contains("standard monomials (7):"));

    let (code, out, _) = run(&["variety", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("points = 7\n"));
    let residuals: Vec<f64> = out.lines().filter(|l| l.contains(".residual")).map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(residuals.len(), 7);
    assert!(residuals.iter().all(|r| *r <= 1e-12));
}

#[test]
fn extract_recovers_the_q7_atoms() {
    let dir = TempDir::new().unwrap();
    let path = q7_moments(&dir);
    let (code, out, _) = run(&["extract", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code, 0);
    let mu: AtomicMeasure<Complex64> = out.parse::<ProblemFile>().unwrap().measure().unwrap();
    assert_eq!(mu.len(), 7);
    for z in q7_roots() {
        assert!((mu.density_at(&z).unwrap().re - 1.0).abs() < 1e-9);
    }
}

#[test]
fn matrix_dump() {
    let (code, out, _) = run(&["matrix", fixture("origin.txt").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "M(1), 3x3\n1\tZ\tZb\n1\t0\t0\n0\t0\t0\n0\t0\t0\n");
}

#[test]
fn grid_of_z_reproduces_the_coordinates() {
    let (code, out, _) = run(&["grid", "--polynomial", "z", "--half-width", "1", "--samples", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert_eq!(out.lines().next(), Some("x,y,re,im,abs"));
    let rows = csv(&out);
    let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(xy, vec![(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]);
    for r in rows {
        assert_eq!((r[2], r[3]), (r[0], r[1]));
    }
}

#[test]
fn grid_size_is_n_squared_plus_one() {
    for n in [2usize, 3, 10] {
        let (_, out, _) = run(&["grid", "--polynomial", "z^2 - w", "--half-width", "0.5", "--center-re", "-1", "--samples", &n.to_string()]);
        assert_eq!(out.lines().count(), n * n + 1);
    }
    assert_eq!(run(&["grid", "--polynomial", "z", "--half-width", "1", "--samples", "1"]).0, 1);
    assert_eq!(run(&["grid", "--polynomial", "z", "--half-width", "0", "--samples", "4"]).0, 1);
}

#[test]
fn q7_grid_vanishes_at_the_seven_roots() {
    let q7 = "z^3 - 8iz - 5w";
    for z in q7_roots() {
        let (code, out, _) = run(&[
            "grid", "--polynomial", q7, "--center-re", &z.re.to_string(), "--center-im", &z.im.to_string(), "--half-width", "0.05", "--samples", "5",
        ]);
        assert_eq!(code, 0);
        let rows = csv(&out);
        let centre = rows[12];
        assert!(centre[4] <= 1e-9, "|q7({z})| = {}", centre[4]);
        assert!(rows.iter().all(|r| r[4] >= centre[4]));
    }

    // On a window covering all seven points, the sample nearest each root is
    // a local minimum of |q7|.
    let n = 81;
    let (_, out, _) = run(&["grid", "--polynomial", q7, "--half-width", "3", "--samples", &n.to_string()]);
    let rows = csv(&out);
    let step = 6.0 / (n - 1) as f64;
    for z in q7_roots() {
        let ix = ((z.re + 3.0) / step).round() as usize;
        let iy = ((z.im + 3.0) / step).round() as usize;
        let here = rows[iy * n + ix][4];
        for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let there = rows[(iy as i64 + dy) as usize * n + (ix as i64 + dx) as usize][4];
            assert!(here <= there, "{z}: {here} > {there}");
        }
    }
}

#[test]
fn q_lc_zero_locus_is_a_line_and_a_circle() {
    let q_lc = "iz^2w + zw^2 - 5iz - 5w";
    let n = 41;
    let (_, out, _) = run(&["grid", "--polynomial", q_lc, "--half-width", "3", "--samples", &n.to_string()]);
    let rows = csv(&out);
    // The diagonal x = y is the line z = iz̄.
    for i in 0..n {
        let r = rows[i * n + i];
        assert_eq!(r[0], r[1]);
        assert!(r[4] <= 1e-9, "{r:?}");
    }
    // Off the line and the circle |z|² = 5 the polynomial does not vanish.
    for r in &rows {
        let (x, y) = (r[0], r[1]);
        if (x - y).abs() > 0.1 && (x * x + y * y - 5.0).abs() > 0.5 {
            assert!(r[4] > 1e-3, "{r:?}");
        }
    }
    for k in 0..8 {
        let t = k as f64 * std::f64::consts::PI / 4.0 + 0.3;
        let (x, y) = (5f64.sqrt() * t.cos(), 5f64.sqrt() * t.sin());
        let (_, out, _) =
            run(&["grid", "--polynomial", q_lc, "--center-re", &x.to_string(), "--center-im", &y.to_string(), "--half-width", "0.1", "--samples", "3"]);
        assert!(csv(&out)[4][4] <= 1e-9);
    }
}

#[test]
fn exit_codes_follow_the_verdict() {
    use moment_forge::solver::Verdict;
    assert_eq!(exit_code(Verdict::Yes), 0);
    assert_eq!(exit_code(Verdict::No), 2);
    assert_eq!(exit_code(Verdict::Inconclusive), 3);
}

#[test]
fn five_of_seven_atoms_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let mut p = ProblemFile::read(&fixture("q7_atoms.txt")).unwrap();
    p.atoms.truncate(5);
    let path = dir.path().join("five.txt");
    std::fs::write(&path, p.serialize()).unwrap();
    let (code, out, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 3, "{out}");
}

#[test]
fn tolerance_precedence() {
    assert_eq!(resolve_tol(Some(1e-6), Some(1e-7), Some("1e-8")).unwrap(), 1e-6);
    assert_eq!(resolve_tol(None, Some(1e-7), Some("1e-8")).unwrap(), 1e-7);
    assert_eq!(resolve_tol(None, None, Some("1e-8")).unwrap(), 1e-8);
    assert_eq!(resolve_tol(None, None, None).unwrap(), 1e-9);
    assert!(resolve_tol(None, None, Some("tiny")).is_err());
    assert!(resolve_tol(Some(-1.0), None, None).is_err());

    let out = Command::new(env!("CARGO_BIN_EXE_moment-forge"))
        .args(["check", fixture("origin.txt").to_str().unwrap()])
        .env("MOMENT_FORGE_TOL", "nonsense")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stderr).unwrap().trim(), "cli: MOMENT_FORGE_TOL: invalid number `nonsense`");
}
