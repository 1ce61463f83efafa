//! Problem files: one `key = value` pair per line, lists as indexed keys.
//!
//! ```text
//! # q7 with unit densities
//! k = 3
//! polynomial = z^3 - 8iz - 5w
//! atoms[0].z_re = 0
//! atoms[0].z_im = 0
//! atoms[0].density = 1
//! ```
//!
//! Values are exact when written as integers or `a/b`, floating point when
//! they contain a decimal point or an exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use moment_forge::moment::MomentSequence;
use moment_forge::poly::Polynomial;
use moment_forge::scalar::{f64_to_rational, format_f64, format_rational, parse_rational, GaussianRational};
use moment_forge::solver::AtomicMeasure;
use moment_forge::{Complex64, Scalar};
use num_rational::BigRational;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn parse(s: &str) -> Option<Value> {
        let s = s.trim();
        let exact_literal = !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '/' | ' '));
        if exact_literal {
            return parse_rational(s).map(Value::Exact);
        }
        let x: f64 = s.parse().ok()?;
        x.is_finite().then_some(Value::Float(x))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    /// Floats enter exact arithmetic at their exact binary value.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Value::Exact(q) => q.clone(),
            Value::Float(x) => f64_to_rational(*x).expect("finite by construction"),
        }
    }

    pub fn from_scalar_part<F: Scalar>(part: &F) -> Value {
        match part.as_exact() {
            Some(q) => Value::Exact(q.re),
            None => Value::Float(part.to_c64().re),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => f.write_str(&format_rational(q)),
            Value::Float(x) => f.write_str(&format_f64(*x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentEntry {
    pub i: u32,
    pub j: u32,
    pub re: Value,
    pub im: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomEntry {
    pub z_re: Value,
    pub z_im: Option<Value>,
    pub density: Value,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemFile {
    pub k: u32,
    pub tol: Option<f64>,
    pub polynomial: Option<String>,
    /// Moments absent from the file are zero instead of an error.
    pub implicit_zero: bool,
    pub moments: Vec<MomentEntry>,
    pub atoms: Vec<AtomEntry>,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Problem(msg.into())
}

fn scalar<F: Scalar>(re: &Value, im: Option<&Value>) -> F {
    let z = GaussianRational::new(re.to_rational(), im.map(Value::to_rational).unwrap_or_else(|| BigRational::from_integer(0.into())));
    F::from_exact(&z)
}

#[derive(Default)]
struct Partial {
    fields: BTreeMap<String, (usize, String)>,
}

fn value_at(list: &str, n: usize, field: &str, entry: Option<(usize, String)>) -> Result<Option<Value>, CliError> {
    entry
        .map(|(line, raw)| Value::parse(&raw).ok_or_else(|| schema(format!("line {line}: {list}[{n}].{field}: invalid number `{raw}`"))))
        .transpose()
}

fn required(list: &str, n: usize, field: &str, v: Option<Value>) -> Result<Value, CliError> {
    v.ok_or_else(|| schema(format!("{list}[{n}].{field} missing")))
}

fn index(list: &str, n: usize, field: &str, entry: Option<(usize, String)>) -> Result<u32, CliError> {
    let (line, raw) = entry.ok_or_else(|| schema(format!("{list}[{n}].{field} missing")))?;
    raw.trim().parse().map_err(|_| schema(format!("line {line}: {list}[{n}].{field}: expected a non-negative integer, got `{raw}`")))
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<ProblemFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    /// Problem text; floats are written with 17 significant digits so that
    /// reading it back gives the same file.
    pub fn serialize(&self) -> String {
        let mut out = format!("k = {}\n", self.k);
        if let Some(t) = self.tol {
            out.push_str(&format!("tol = {}\n", format_f64(t)));
        }
        if let Some(p) = &self.polynomial {
            out.push_str(&format!("polynomial = {p}\n"));
        }
        if self.implicit_zero {
            out.push_str("implicit_zero = true\n");
        }
        for (n, m) in self.moments.iter().enumerate() {
            out.push_str(&format!("moments[{n}].i = {}\nmoments[{n}].j = {}\nmoments[{n}].re = {}\n", m.i, m.j, m.re));
            if let Some(im) = &m.im {
                out.push_str(&format!("moments[{n}].im = {im}\n"));
            }
        }
        for (n, a) in self.atoms.iter().enumerate() {
            out.push_str(&format!("atoms[{n}].z_re = {}\n", a.z_re));
            if let Some(im) = &a.z_im {
                out.push_str(&format!("atoms[{n}].z_im = {im}\n"));
            }
            out.push_str(&format!("atoms[{n}].density = {}\n", a.density));
        }
        out
    }

    /// True when every number in the file, including the polynomial's
    /// coefficients, is an exact rational.
    pub fn is_exact(&self) -> bool {
        let poly_exact = self.polynomial.as_deref().is_none_or(|p| !p.contains(['.', 'e', 'E']));
        poly_exact
            && self.moments.iter().all(|m| m.re.is_exact() && m.im.as_ref().is_none_or(Value::is_exact))
            && self.atoms.iter().all(|a| a.z_re.is_exact() && a.z_im.as_ref().is_none_or(Value::is_exact) && a.density.is_exact())
    }

    pub fn polynomial<F: Scalar>(&self) -> Result<Polynomial<F>, CliError> {
        let text = self.polynomial.as_deref().ok_or_else(|| schema("polynomial missing"))?;
        Ok(text.parse()?)
    }

    pub fn measure<F: Scalar>(&self) -> Result<AtomicMeasure<F>, CliError> {
        if self.atoms.is_empty() {
            return Err(schema("atoms missing"));
        }
        Ok(AtomicMeasure::new(self.atoms.iter().map(|a| (scalar::<F>(&a.z_re, a.z_im.as_ref()), scalar::<F>(&a.density, None))))?)
    }

    /// The moment sequence, completed by conjugation. Atom files are turned
    /// into moments first.
    pub fn moments<F: Scalar>(&self) -> Result<MomentSequence<F>, CliError> {
        if self.moments.is_empty() {
            if self.atoms.is_empty() {
                return Err(schema("moments missing"));
            }
            return Ok(moment_forge::solver::generate_moments(&self.measure::<F>()?, self.k)?);
        }
        let limit = 2 * self.k;
        let mut given: BTreeMap<(u32, u32), (usize, F)> = BTreeMap::new();
        for (n, m) in self.moments.iter().enumerate() {
            if m.i + m.j > limit {
                return Err(schema(format!("moments[{n}]: index ({},{}) exceeds 2k = {limit}", m.i, m.j)));
            }
            if let Some((first, _)) = given.get(&(m.i, m.j)) {
                return Err(schema(format!("moments[{n}]: moment ({},{}) already given by moments[{first}]", m.i, m.j)));
            }
            given.insert((m.i, m.j), (n, scalar(&m.re, m.im.as_ref())));
        }
        let mut entries = BTreeMap::new();
        for (&(i, j), (n, v)) in &given {
            if let Some((other, u)) = given.get(&(j, i)) {
                if *u != v.conj() {
                    return Err(schema(format!(
                        "moments[{n}] and moments[{other}]: asymmetric duplicate entries ({i},{j}) and ({j},{i})"
                    )));
                }
            }
            entries.insert((i, j), v.clone());
            entries.entry((j, i)).or_insert_with(|| v.conj());
        }
        if self.implicit_zero {
            for s in 0..=limit {
                for i in 0..=s {
                    entries.entry((i, s - i)).or_insert_with(F::zero);
                }
            }
        }
        Ok(MomentSequence::new(self.k, entries)?)
    }

    /// The same problem with the measure as its atom list.
    pub fn with_atoms<F: Scalar>(&self, mu: &AtomicMeasure<F>) -> ProblemFile {
        let atoms = mu
            .atoms()
            .iter()
            .map(|a| AtomEntry {
                z_re: Value::from_scalar_part(&a.z.re()),
                z_im: Some(Value::from_scalar_part(&a.z.im())),
                density: Value::from_scalar_part(&a.density.re()),
            })
            .collect();
        ProblemFile { atoms, moments: Vec::new(), implicit_zero: false, ..self.clone() }
    }

    /// Entries with `i ≤ j`; the rest follow by conjugation.
    pub fn with_moments<F: Scalar>(&self, gamma: &MomentSequence<F>) -> ProblemFile {
        let moments = gamma
            .entries()
            .iter()
            .filter(|((i, j), _)| i <= j)
            .map(|(&(i, j), v)| MomentEntry {
                i,
                j,
                re: Value::from_scalar_part(&v.re()),
                im: Some(Value::from_scalar_part(&v.im())),
            })
            .collect();
        ProblemFile { k: gamma.k(), moments, atoms: Vec::new(), implicit_zero: false, ..self.clone() }
    }
}

impl std::str::FromStr for ProblemFile {
    type Err = CliError;

    fn from_str(text: &str) -> Result<ProblemFile, CliError> {
        let mut k = None;
        let mut tol = None;
        let mut polynomial = None;
        let mut implicit_zero = false;
        let mut lists: BTreeMap<(&'static str, usize), Partial> = BTreeMap::new();
        let mut seen = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| schema(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line_no) {
                return Err(schema(format!("line {line_no}: `{key}` already set on line {prev}")));
            }
            match key {
                "k" => {
                    let v: u32 = value.parse().map_err(|_| schema(format!("line {line_no}: k: expected a positive integer, got `{value}`")))?;
                    if v == 0 {
                        return Err(schema(format!("line {line_no}: k must be positive")));
                    }
                    k = Some(v);
                }
                "tol" => {
                    let v: f64 = value.parse().map_err(|_| schema(format!("line {line_no}: tol: invalid number `{value}`")))?;
                    if !(v.is_finite() && v > 0.0) {
                        return Err(schema(format!("line {line_no}: tol must be positive")));
                    }
                    tol = Some(v);
                }
                "polynomial" => polynomial = Some(value.to_string()),
                "implicit_zero" => {
                    implicit_zero = value.parse().map_err(|_| schema(format!("line {line_no}: implicit_zero: expected true or false")))?;
                }
                _ => {
                    let (list, n, field) = split_list_key(key).ok_or_else(|| schema(format!("line {line_no}: unknown key `{key}`")))?;
                    let fields: &[&str] = if list == "moments" { &["i", "j", "re", "im"] } else { &["z_re", "z_im", "density"] };
                    if !fields.contains(&field) {
                        return Err(schema(format!("line {line_no}: {list}[{n}]: unknown field `{field}`")));
                    }
                    lists.entry((list, n)).or_default().fields.insert(field.to_string(), (line_no, value.to_string()));
                }
            }
        }

        let k = k.ok_or_else(|| schema("k missing"))?;
        let mut moments = Vec::new();
        let mut atoms = Vec::new();
        for ((list, n), mut p) in lists {
            let expected = if list == "moments" { moments.len() } else { atoms.len() };
            if n != expected {
                return Err(schema(format!("{list}[{expected}] missing (indices must be contiguous)")));
            }
            if list == "moments" {
                let i = index(list, n, "i", p.fields.remove("i"))?;
                let j = index(list, n, "j", p.fields.remove("j"))?;
                let re = required(list, n, "re", value_at(list, n, "re", p.fields.remove("re"))?)?;
                let im = value_at(list, n, "im", p.fields.remove("im"))?;
                moments.push(MomentEntry { i, j, re, im });
            } else {
                let z_re = required(list, n, "z_re", value_at(list, n, "z_re", p.fields.remove("z_re"))?)?;
                let z_im = value_at(list, n, "z_im", p.fields.remove("z_im"))?;
                let density = required(list, n, "density", value_at(list, n, "density", p.fields.remove("density"))?)?;
                atoms.push(AtomEntry { z_re, z_im, density });
            }
        }
        if !moments.is_empty() && !atoms.is_empty() {
            return Err(schema("a problem gives either moments or atoms, not both"));
        }
        if let Some(p) = &polynomial {
            p.parse::<Polynomial<Complex64>>()?;
        }
        Ok(ProblemFile { k, tol, polynomial, implicit_zero, moments, atoms })
    }
}

/// `moments[3].re` → `("moments", 3, "re")`.
fn split_list_key(key: &str) -> Option<(&'static str, usize, &str)> {
    let (head, field) = key.split_once('.')?;
    let (name, rest) = head.split_once('[')?;
    let n = rest.strip_suffix(']')?.trim().parse().ok()?;
    let list = match name.trim() {
        "moments" => "moments",
        "atoms" => "atoms",
        _ => return None,
    };
    Some((list, n, field.trim()))
}
