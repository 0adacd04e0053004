//! Coefficient tables stored as exact rational functions of one variable.
//!
//! The tables ship as a text asset (`data/tables.txt`) written in the
//! factored form (rational times polynomial factors). Loading expands every
//! entry to an exact rational function, resolves aliases, verifies the
//! per-table review checksum and caches `f64` coefficients for Horner
//! evaluation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

type Q = Ratio<i128>;

const SHIPPED: &str = include_str!("../data/tables.txt");

/// Polynomial with exact rational coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq)]
struct ExactPoly(Vec<Q>);

impl ExactPoly {
    fn constant(c: Q) -> Self {
        Self(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(Q::zero());
        }
        self
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out).trimmed()
    }

    fn eval(&self, x: Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64().unwrap()).collect()
    }
}

/// Exact rational function `num(x)/den(x)`.
#[derive(Clone, Debug, PartialEq)]
struct ExactRational {
    num: ExactPoly,
    den: ExactPoly,
}

impl ExactRational {
    fn one() -> Self {
        Self {
            num: ExactPoly::constant(Q::one()),
            den: ExactPoly::constant(Q::one()),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    fn eval(&self, x: Q) -> Result<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Table("checksum point hits a pole".into()));
        }
        Ok(self.num.eval(x) / d)
    }
}

/// The argument the polynomials of a table are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    /// `s² = sin² I`
    S2,
    /// `e²`
    E2,
    /// `η = √(1 − e²)`
    Eta,
}

impl Variable {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "s2" => Ok(Self::S2),
            "e2" => Ok(Self::E2),
            "eta" => Ok(Self::Eta),
            other => Err(Error::Table(format!("unknown variable `{other}`"))),
        }
    }
}

/// One table coefficient, as a rational function of the table variable.
#[derive(Clone, Debug)]
pub struct Coefficient {
    exact: ExactRational,
    num: Vec<f64>,
    den: Vec<f64>,
    /// Derived from a bracket identity rather than transcribed.
    pub derived: bool,
}

impl Coefficient {
    fn new(exact: ExactRational, derived: bool) -> Self {
        let num = exact.num.to_f64();
        let den = if exact.den.is_one() {
            Vec::new()
        } else {
            exact.den.to_f64()
        };
        Self {
            exact,
            num,
            den,
            derived,
        }
    }

    #[inline]
    fn horner<S: Scalar>(coeffs: &[f64], x: S) -> S {
        let lit = |c: f64| S::Real::lit(c);
        let mut it = coeffs.iter().rev();
        let Some(&top) = it.next() else {
            return S::zero();
        };
        it.fold(S::from_real(lit(top)), |acc, &c| acc * x + lit(c))
    }

    /// Value at `x`.
    #[inline]
    pub fn eval<S: Scalar>(&self, x: S) -> S {
        let num = Self::horner(&self.num, x);
        if self.den.is_empty() {
            num
        } else {
            num / Self::horner(&self.den, x)
        }
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative<T: Real>(&self, x: T) -> (T, T) {
        fn both<T: Real>(c: &[f64], x: T) -> (T, T) {
            c.iter()
                .rev()
                .fold((T::zero(), T::zero()), |(v, d), &ci| (v * x + T::lit(ci), d * x + v))
        }
        let (n, dn) = both(&self.num, x);
        if self.den.is_empty() {
            (n, dn)
        } else {
            let (d, dd) = both(&self.den, x);
            (n / d, (dn * d - n * dd) / (d * d))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.num.0.iter().all(|c| c.is_zero())
    }
}

/// A table: index tuples mapped to coefficients.
#[derive(Clone, Debug)]
pub struct Table {
    pub id: String,
    pub variable: Variable,
    entries: BTreeMap<Vec<i32>, Coefficient>,
}

impl Table {
    pub fn get(&self, idx: &[i32]) -> Option<&Coefficient> {
        self.entries.get(idx)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[i32], &Coefficient)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Value of entry `idx` at `x`; zero for unlisted indices.
    #[inline]
    pub fn eval<S: Scalar>(&self, idx: &[i32], x: S) -> S {
        self.entries.get(idx).map_or_else(S::zero, |c| c.eval(x))
    }

    fn checksum(&self) -> Result<Q> {
        let x = Q::new(3, 2);
        self.entries.iter().try_fold(Q::zero(), |acc, (idx, c)| {
            let w: i128 = idx.iter().map(|&i| i as i128 + 11).product();
            Ok(acc + c.exact.eval(x)? * Q::from_integer(w))
        })
    }
}

/// All coefficient tables of the theory.
#[derive(Clone, Debug)]
pub struct CoefficientTables {
    tables: BTreeMap<String, Table>,
}

/// Identifies one table entry, e.g. `beta3(1,4,2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntryId {
    pub table: String,
    pub index: Vec<i32>,
}

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
        write!(f, "{}({})", self.table, idx.join(","))
    }
}

struct RawTable {
    id: String,
    variable: Variable,
    check: Q,
    lines: Vec<(Vec<i32>, String, bool, usize)>,
}

impl CoefficientTables {
    /// The tables shipped with the crate.
    pub fn shipped() -> Arc<Self> {
        static CELL: OnceLock<Arc<CoefficientTables>> = OnceLock::new();
        CELL.get_or_init(|| Arc::new(Self::parse(SHIPPED).expect("shipped coefficient tables are valid")))
            .clone()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_inner(text, true)
    }

    /// Parse without verifying the review checksums.
    pub fn parse_unchecked(text: &str) -> Result<Self> {
        Self::parse_inner(text, false)
    }

    fn parse_inner(text: &str, verify: bool) -> Result<Self> {
        let raw = parse_blocks(text)?;
        let mut tables = BTreeMap::new();
        let mut exprs: BTreeMap<(String, Vec<i32>), (String, bool, usize)> = BTreeMap::new();
        for t in &raw {
            for (idx, expr, derived, line) in &t.lines {
                if exprs
                    .insert((t.id.clone(), idx.clone()), (expr.clone(), *derived, *line))
                    .is_some()
                {
                    return Err(Error::Table(format!("line {line}: duplicate entry {}{idx:?}", t.id)));
                }
            }
        }
        let mut cache: BTreeMap<(String, Vec<i32>), ExactRational> = BTreeMap::new();
        for t in &raw {
            let mut entries = BTreeMap::new();
            for (idx, _, derived, _) in &t.lines {
                let exact = resolve(&(t.id.clone(), idx.clone()), &exprs, &mut cache, &mut HashSet::new())?;
                entries.insert(idx.clone(), Coefficient::new(exact, *derived));
            }
            let table = Table {
                id: t.id.clone(),
                variable: t.variable,
                entries,
            };
            if verify {
                let sum = table.checksum()?;
                if sum != t.check {
                    return Err(Error::Table(format!(
                        "table {} fails its review checksum: expected {}, computed {}",
                        t.id, t.check, sum
                    )));
                }
            }
            tables.insert(t.id.clone(), table);
        }
        Ok(Self { tables })
    }

    pub fn table(&self, id: &str) -> &Table {
        self.tables
            .get(id)
            .unwrap_or_else(|| panic!("coefficient table `{id}` is not loaded"))
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }

    /// Copy with entry `id` multiplied by `factor`; used to inject faults
    /// when exercising the verification suite.
    pub fn with_scaled_entry(&self, id: &EntryId, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        let table = out
            .tables
            .get_mut(&id.table)
            .ok_or_else(|| Error::Table(format!("no table `{}`", id.table)))?;
        let entry = table
            .entries
            .get_mut(&id.index)
            .ok_or_else(|| Error::Table(format!("no entry {id}")))?;
        entry.num.iter_mut().for_each(|c| *c *= factor);
        Ok(out)
    }

    /// Review checksums recomputed from the entries, per table.
    pub fn checksums(&self) -> Result<Vec<(String, String)>> {
        self.tables
            .values()
            .map(|t| Ok((t.id.clone(), t.checksum()?.to_string())))
            .collect()
    }
}

fn parse_blocks(text: &str) -> Result<Vec<RawTable>> {
    let mut out = Vec::new();
    let mut current: Option<RawTable> = None;
    for (n, raw_line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("table ") {
            if current.is_some() {
                return Err(Error::Table(format!("line {line_no}: nested table")));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [id, var, check] = parts.as_slice() else {
                return Err(Error::Table(format!("line {line_no}: malformed table header")));
            };
            let check = check
                .strip_prefix("check=")
                .ok_or_else(|| Error::Table(format!("line {line_no}: missing check=")))?;
            current = Some(RawTable {
                id: id.to_string(),
                variable: Variable::parse(var)?,
                check: parse_rational(check)
                    .ok_or_else(|| Error::Table(format!("line {line_no}: bad checksum `{check}`")))?,
                lines: Vec::new(),
            });
        } else if line == "end" {
            out.push(
                current
                    .take()
                    .ok_or_else(|| Error::Table(format!("line {line_no}: `end` outside a table")))?,
            );
        } else {
            let table = current
                .as_mut()
                .ok_or_else(|| Error::Table(format!("line {line_no}: entry outside a table")))?;
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::Table(format!("line {line_no}: missing `=`")))?;
            let (derived, lhs) = match lhs.trim().strip_prefix('+') {
                Some(rest) => (true, rest),
                None => (false, lhs.trim()),
            };
            let idx = lhs
                .split_whitespace()
                .map(|t| t.parse::<i32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Table(format!("line {line_no}: bad index tuple `{lhs}`")))?;
            if idx.is_empty() {
                return Err(Error::Table(format!("line {line_no}: empty index tuple")));
            }
            table.lines.push((idx, rhs.trim().to_string(), derived, line_no));
        }
    }
    if current.is_some() {
        return Err(Error::Table("unterminated table".into()));
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.parse().ok()?;
            let d: i128 = d.parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

type Key = (String, Vec<i32>);

fn resolve(
    key: &Key,
    exprs: &BTreeMap<Key, (String, bool, usize)>,
    cache: &mut BTreeMap<Key, ExactRational>,
    visiting: &mut HashSet<Key>,
) -> Result<ExactRational> {
    if let Some(v) = cache.get(key) {
        return Ok(v.clone());
    }
    let (expr, _, line) = exprs
        .get(key)
        .ok_or_else(|| Error::Table(format!("reference to missing entry {}{:?}", key.0, key.1)))?;
    if !visiting.insert(key.clone()) {
        return Err(Error::Table(format!("line {line}: circular alias")));
    }
    let value = parse_expression(expr, *line, exprs, cache, visiting)?;
    visiting.remove(key);
    cache.insert(key.clone(), value.clone());
    Ok(value)
}

fn parse_expression(
    expr: &str,
    line: usize,
    exprs: &BTreeMap<Key, (String, bool, usize)>,
    cache: &mut BTreeMap<Key, ExactRational>,
    visiting: &mut HashSet<Key>,
) -> Result<ExactRational> {
    let err = |msg: &str| Error::Table(format!("line {line}: {msg} in `{expr}`"));
    let mut acc = ExactRational::one();
    let mut dividing = false;
    let mut rest = expr.trim();
    while !rest.is_empty() {
        let factor: ExactRational;
        if let Some(r) = rest.strip_prefix('/') {
            dividing = true;
            rest = r.trim_start();
            continue;
        } else if let Some(r) = rest.strip_prefix('[') {
            let (body, tail) = r.split_once(']').ok_or_else(|| err("unclosed `[`"))?;
            let mut coeffs = body
                .split_whitespace()
                .map(parse_rational)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("bad polynomial coefficient"))?;
            if coeffs.is_empty() {
                return Err(err("empty polynomial"));
            }
            coeffs.reverse();
            factor = ExactRational {
                num: ExactPoly(coeffs).trimmed(),
                den: ExactPoly::constant(Q::one()),
            };
            rest = tail.trim_start();
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let token = &rest[..end];
            rest = rest[end..].trim_start();
            if let Some(q) = parse_rational(token) {
                factor = ExactRational {
                    num: ExactPoly::constant(q),
                    den: ExactPoly::constant(Q::one()),
                };
            } else {
                let (negate, token) = match token.strip_prefix('-') {
                    Some(t) => (true, t),
                    None => (false, token),
                };
                let (name, args) = token
                    .strip_suffix(')')
                    .and_then(|t| t.split_once('('))
                    .ok_or_else(|| err(&format!("unrecognised token `{token}`")))?;
                let idx = args
                    .split(',')
                    .map(|a| a.trim().parse::<i32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| err("bad reference index"))?;
                let mut r = resolve(&(name.to_string(), idx), exprs, cache, visiting)?;
                if negate {
                    r.num = r.num.mul(&ExactPoly::constant(-Q::one()));
                }
                factor = r;
            }
        }
        if dividing {
            if factor.num.0.iter().all(|c| c.is_zero()) {
                return Err(err("division by zero"));
            }
            acc = acc.mul(&ExactRational {
                num: factor.den,
                den: factor.num,
            });
        } else {
            acc = acc.mul(&factor);
        }
    }
    // normalise so the denominator's leading coefficient is positive
    if acc.den.0.last().is_some_and(|c| c.is_negative()) {
        acc.num = acc.num.mul(&ExactPoly::constant(-Q::one()));
        acc.den = acc.den.mul(&ExactPoly::constant(-Q::one()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_load_and_pass_checksums() {
        let t = CoefficientTables::shipped();
        for id in ["B", "b", "q", "bi", "beta3", "beta4", "A15", "A5"] {
            assert!(t.table(id).entries().count() > 0, "{id}");
        }
    }

    #[test]
    fn aliases_resolve() {
        let t = CoefficientTables::shipped();
        let b = t.table("B");
        let x = 0.37_f64;
        assert_eq!(b.eval(&[0, 0, 0], x), b.eval(&[0, 0, 1], x));
        assert!((b.eval(&[0, 0, 1], x) - 10.0 * (7.0 * x * x - 16.0 * x + 8.0)).abs() < 1e-12);
        assert!((b.eval(&[1, -1, 0], x) - (2.0 - 3.0 * x)).abs() < 1e-15);
        let beta = t.table("beta3");
        assert_eq!(beta.eval(&[0, 2, 0], x), -beta.eval(&[0, 2, 2], x));
        let a5 = t.table("A5");
        let a060 = 2.0 * (27.0 * x * x - 24.0 * x + 8.0);
        assert!((a5.eval(&[0, 0, 0], x) - 462.0 * a060).abs() < 1e-10);
    }

    #[test]
    fn unlisted_entries_are_zero() {
        let t = CoefficientTables::shipped();
        assert_eq!(t.table("B").eval(&[0, 4, 0], 0.3_f64), 0.0);
        assert_eq!(t.table("q").eval(&[1, 0], 0.3_f64), 0.0);
    }

    #[test]
    fn rational_entries_and_derivatives() {
        let t = CoefficientTables::shipped();
        let c = t.table("A5").get(&[1, 1, 5]).unwrap();
        let x = 0.5_f64;
        let expected = -72.0 * (43.0 * x - 34.0) / (3.0 * x - 2.0);
        assert!((c.eval(x) - expected).abs() < 1e-12);
        let (v, d) = c.eval_with_derivative(x);
        let h = 1e-6;
        let fd = (c.eval(x + h) - c.eval(x - h)) / (2.0 * h);
        assert!((v - expected).abs() < 1e-12);
        assert!((d - fd).abs() < 1e-5 * d.abs());
    }

    #[test]
    fn checksum_detects_edits() {
        let edited = SHIPPED.replacen("0 0 1 = 10 [7 -16 8]", "0 0 1 = 10 [7 -16 9]", 1);
        let err = CoefficientTables::parse(&edited).unwrap_err();
        assert!(err.to_string().contains("table B"), "{err}");
        assert!(CoefficientTables::parse_unchecked(&edited).is_ok());
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let bad = [
            "table X s2 check=0\n0 0 = [1 2\nend\n",
            "table X s2 check=0\n0 0 = Y(1,2)\nend\n",
            "table X s2 check=0\n0 0 = X(0,0)\nend\n",
            "table X s7 check=0\nend\n",
            "0 0 = 1\n",
            "table X s2 check=0\n0 0 = 1 / 0\nend\n",
        ];
        for text in bad {
            assert!(CoefficientTables::parse_unchecked(text).is_err(), "{text}");
        }
    }

    #[test]
    fn fault_injection_scales_one_entry() {
        let t = CoefficientTables::shipped();
        let id = EntryId {
            table: "B".into(),
            index: vec![1, 3, 0],
        };
        let f = t.with_scaled_entry(&id, 1.001).unwrap();
        let x = 0.4_f64;
        let (a, b) = (t.table("B").eval(&[1, 3, 0], x), f.table("B").eval(&[1, 3, 0], x));
        assert!((b / a - 1.001).abs() < 1e-12);
        assert_eq!(t.table("B").eval(&[1, 3, 1], x), f.table("B").eval(&[1, 3, 1], x));
        assert_eq!(id.to_string(), "B(1,3,0)");
    }
}
