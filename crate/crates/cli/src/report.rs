use std::fmt::Write;

use moment_forge::groebner::GroebnerBasis;
use moment_forge::moment::{label_name, MomentMatrix};
use moment_forge::scalar::format_f64;
use moment_forge::solver::{AtomicMeasure, BasisData, CheckReport, ConditionResult, Multiplier, NumericalCondition};
use moment_forge::variety::{Multiplicity, Variety};
use moment_forge::Scalar;

use crate::CliError;

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn multiplicity(m: Multiplicity) -> &'static str {
    match m {
        Multiplicity::Simple => "simple",
        Multiplicity::Multiple => "multiple",
    }
}

pub fn matrix<F: Scalar>(m: &MomentMatrix<F>, structured: bool) -> String {
    if !structured {
        return format!("M({}), {}x{}\n{m}", m.k(), m.size(), m.size());
    }
    let mut out = format!("k = {}\nsize = {}\n", m.k(), m.size());
    let labels: Vec<String> = m.labels().iter().map(label_name).collect();
    writeln!(out, "labels = {}", labels.join(", ")).unwrap();
    for r in 0..m.size() {
        for c in 0..m.size() {
            writeln!(out, "m[{r}][{c}] = {}", m.entry(r, c).format_coeff()).unwrap();
        }
    }
    out
}

pub fn variety(v: &Variety, structured: bool) -> String {
    let mut out = String::new();
    if structured {
        writeln!(out, "points = {}", v.len()).unwrap();
        for (n, p) in v.points().iter().enumerate() {
            writeln!(out, "point[{n}].z_re = {}", format_f64(p.z.re)).unwrap();
            writeln!(out, "point[{n}].z_im = {}", format_f64(p.z.im)).unwrap();
            writeln!(out, "point[{n}].residual = {}", format_f64(p.residual)).unwrap();
            writeln!(out, "point[{n}].multiplicity = {}", multiplicity(p.multiplicity)).unwrap();
        }
        return out;
    }
    writeln!(out, "{} points", v.len()).unwrap();
    for p in v.points() {
        writeln!(out, "  z = {}  residual {}  {}", p.z.format_coeff(), format_f64(p.residual), multiplicity(p.multiplicity)).unwrap();
    }
    out
}

fn kind(basis: &BasisData) -> &'static str {
    if basis.is_exact() {
        "exact"
    } else {
        "floating point"
    }
}

pub fn basis(basis: &BasisData, structured: bool) -> Result<String, CliError> {
    let std = match basis {
        BasisData::Exact(g) => g.standard_monomials()?,
        BasisData::Approx(g) => g.standard_monomials()?,
    };
    let std: Vec<String> = std.monomials().iter().map(|m| if m.degree() == 0 { "1".into() } else { m.to_string() }).collect();
    let mut out = String::new();
    if structured {
        writeln!(out, "exact = {}\nelements = {}", basis.is_exact(), basis.len()).unwrap();
        for (n, g) in basis.element_strings().iter().enumerate() {
            writeln!(out, "basis[{n}] = {g}").unwrap();
        }
        writeln!(out, "standard_monomials = {}", std.join(", ")).unwrap();
        return Ok(out);
    }
    writeln!(out, "{} elements, {}", basis.len(), kind(basis)).unwrap();
    for (n, g) in basis.element_strings().iter().enumerate() {
        writeln!(out, "g{} = {g}", n + 1).unwrap();
    }
    writeln!(out, "standard monomials ({}): {}", std.len(), std.join(", ")).unwrap();
    Ok(out)
}

fn label(c: &NumericalCondition<impl Scalar>) -> String {
    match c.multiplier {
        Multiplier::One => format!("g{}", c.element + 1),
        Multiplier::Z => format!("z·g{}", c.element + 1),
    }
}

pub fn conditions<F: Scalar>(g: &GroebnerBasis<F>, conds: &[NumericalCondition<F>], structured: bool) -> String {
    let mut out = String::new();
    if structured {
        for (n, c) in conds.iter().enumerate() {
            writeln!(out, "condition[{n}].polynomial = {}", label(c)).unwrap();
            writeln!(out, "condition[{n}].equation = {c}").unwrap();
        }
        return out;
    }
    for (n, e) in g.elements().iter().enumerate() {
        writeln!(out, "g{} = {e}", n + 1).unwrap();
        for c in conds.iter().filter(|c| c.element == n) {
            writeln!(out, "  Λ({}): {c}", label(c)).unwrap();
        }
    }
    out
}

pub fn measure<F: Scalar>(mu: &AtomicMeasure<F>) -> String {
    let mut out = format!("{} atoms\n", mu.len());
    for a in mu.atoms() {
        writeln!(out, "  z = {}  density = {}", a.z.format_coeff(), a.density.format_coeff()).unwrap();
    }
    out
}

fn condition_text(c: &ConditionResult) -> String {
    format!("{}  [{}]", c.value.format_coeff(), pass(c.passed))
}

pub fn check(r: &CheckReport, structured: bool) -> String {
    if structured {
        return check_structured(r);
    }
    let mut out = String::new();
    let size = (r.k as usize + 1) * (r.k as usize + 2) / 2;
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    writeln!(out, "reason: {}", r.reason).unwrap();
    writeln!(out, "M({}): {size}x{size}, rank {}, nullity {}", r.k, r.rank, r.nullity).unwrap();
    writeln!(
        out,
        "positive semidefinite: {} (eigenvalues in [{}, {}])",
        r.psd.psd,
        format_f64(r.psd.min_eigenvalue),
        format_f64(r.psd.max_eigenvalue)
    )
    .unwrap();
    writeln!(out, "M({}) positive definite: {}", r.k.saturating_sub(1), r.psd.strict_inner).unwrap();
    writeln!(out, "column relation: {} (residual {})", r.is_relation, format_f64(r.relation_residual)).unwrap();
    match &r.variety {
        Some(v) => writeln!(out, "variety: {} points{}", v.len(), if v.all_simple() { "" } else { ", not all simple" }).unwrap(),
        None => writeln!(out, "variety: not computed").unwrap(),
    }
    writeln!(out, "extremal: {}", r.extremal).unwrap();
    if let Some(b) = &r.basis {
        writeln!(out, "basis ({} elements, {}):", b.len(), kind(b)).unwrap();
        if r.elements.is_empty() {
            for (n, g) in b.element_strings().iter().enumerate() {
                writeln!(out, "  g{} = {g}", n + 1).unwrap();
            }
        }
        for (n, e) in r.elements.iter().enumerate() {
            writeln!(out, "  g{} = {}", n + 1, e.polynomial).unwrap();
            writeln!(out, "    Λ(g{}) = {}", n + 1, condition_text(&e.lambda_g)).unwrap();
            writeln!(out, "    Λ(z·g{}) = {}", n + 1, condition_text(&e.lambda_zg)).unwrap();
            match (e.relation_residual, e.relation_holds) {
                (Some(res), Some(ok)) => writeln!(out, "    column relation residual {}  [{}]", format_f64(res), pass(ok)).unwrap(),
                _ => writeln!(out, "    degree exceeds k, not a column of M({})", r.k).unwrap(),
            }
        }
    }
    let opt = |v: Option<bool>| v.map_or("not evaluated", pass);
    writeln!(out, "condition (2): {}", opt(r.condition2)).unwrap();
    writeln!(out, "condition (3): {}", opt(r.condition3)).unwrap();
    match &r.strict {
        Some(s) => writeln!(out, "strict consistency: {} ({} checks, {} failed)", pass(s.passed), s.checked, s.failures.len()).unwrap(),
        None => writeln!(out, "strict consistency: not evaluated").unwrap(),
    }
    match (&r.exact_measure, &r.measure) {
        (Some(mu), _) => out.push_str(&measure(mu)),
        (None, Some(mu)) => out.push_str(&measure(mu)),
        (None, None) => {}
    }
    if !r.warnings.is_empty() {
        writeln!(out, "warnings:").unwrap();
        for w in &r.warnings {
            writeln!(out, "  {w}").unwrap();
        }
    }
    out
}

fn check_structured(r: &CheckReport) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
    kv("verdict", r.verdict.to_string());
    kv("reason", r.reason.clone());
    kv("k", r.k.to_string());
    kv("psd", r.psd.psd.to_string());
    kv("inner_positive_definite", r.psd.strict_inner.to_string());
    kv("min_eigenvalue", format_f64(r.psd.min_eigenvalue));
    kv("max_eigenvalue", format_f64(r.psd.max_eigenvalue));
    kv("is_relation", r.is_relation.to_string());
    kv("relation_residual", format_f64(r.relation_residual));
    kv("rank", r.rank.to_string());
    kv("nullity", r.nullity.to_string());
    if let Some(v) = &r.variety {
        kv("points", v.len().to_string());
        kv("points_simple", v.all_simple().to_string());
    }
    kv("extremal", r.extremal.to_string());
    if let Some(b) = &r.basis {
        kv("basis.exact", b.is_exact().to_string());
        for (n, g) in b.element_strings().iter().enumerate() {
            kv(&format!("basis[{n}]"), g.clone());
        }
    }
    for (n, e) in r.elements.iter().enumerate() {
        kv(&format!("element[{n}].lambda_g"), e.lambda_g.value.format_coeff());
        kv(&format!("element[{n}].lambda_g.passed"), e.lambda_g.passed.to_string());
        kv(&format!("element[{n}].lambda_zg"), e.lambda_zg.value.format_coeff());
        kv(&format!("element[{n}].lambda_zg.passed"), e.lambda_zg.passed.to_string());
        if let (Some(res), Some(ok)) = (e.relation_residual, e.relation_holds) {
            kv(&format!("element[{n}].relation_residual"), format_f64(res));
            kv(&format!("element[{n}].relation_holds"), ok.to_string());
        }
    }
    if let Some(c) = r.condition2 {
        kv("condition2", c.to_string());
    }
    if let Some(c) = r.condition3 {
        kv("condition3", c.to_string());
    }
    if let Some(s) = &r.strict {
        kv("strict", s.passed.to_string());
        kv("strict.checked", s.checked.to_string());
    }
    let atoms: Vec<(String, String, String)> = match (&r.exact_measure, &r.measure) {
        (Some(mu), _) => mu.atoms().iter().map(|a| (a.z.re().format_coeff(), a.z.im().format_coeff(), a.density.format_coeff())).collect(),
        (None, Some(mu)) => mu.atoms().iter().map(|a| (format_f64(a.z.re), format_f64(a.z.im), format_f64(a.density.re))).collect(),
        (None, None) => Vec::new(),
    };
    for (n, (x, y, d)) in atoms.into_iter().enumerate() {
        kv(&format!("atoms[{n}].z_re"), x);
        kv(&format!("atoms[{n}].z_im"), y);
        kv(&format!("atoms[{n}].density"), d);
    }
    for (n, w) in r.warnings.iter().enumerate() {
        kv(&format!("warning[{n}]"), w.clone());
    }
    out
}
