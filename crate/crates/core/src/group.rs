//! Finite groups given by explicit Cayley tables.
//!
//! Elements are dense indices `0..n`. The only structure the rest of the crate
//! needs is multiplication, inversion and enumeration, so nothing symbolic is
//! kept beyond the spec string the group was built from.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order for which [`FiniteGroup::validate`] checks every triple.
pub const EXHAUSTIVE_VALIDATION_LIMIT: usize = 512;
/// Number of random triples checked above [`EXHAUSTIVE_VALIDATION_LIMIT`].
pub const SAMPLED_TRIPLES: usize = 10_000;

/// Description of a group to build.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// Integers modulo `n`.
    Cyclic(usize),
    /// Symmetries of a regular `n`-gon, order `2n`.
    Dihedral(usize),
    /// Direct product with componentwise multiplication.
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn product(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::Product(Box::new(a), Box::new(b))
    }

    /// Order of the group this spec describes, without building it.
    pub fn order(&self) -> Result<usize> {
        match self {
            GroupSpec::Cyclic(n) => Ok(*n),
            GroupSpec::Dihedral(n) => n.checked_mul(2).ok_or(Error::Overflow("group order")),
            GroupSpec::Product(a, b) => a.order()?.checked_mul(b.order()?).ok_or(Error::Overflow("group order")),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            GroupSpec::Cyclic(0) => Err(Error::InvalidSpec("cyclic order must be at least 1".into())),
            GroupSpec::Dihedral(0) => Err(Error::InvalidSpec("dihedral parameter must be at least 1".into())),
            GroupSpec::Product(a, b) => {
                a.check()?;
                b.check()
            }
            _ => Ok(()),
        }
    }

    fn parse_prefix(text: &str) -> Option<(GroupSpec, &str)> {
        let text = text.trim_start();
        if let Some(rest) = text.strip_prefix("product:") {
            let (first, rest) = Self::parse_prefix(rest)?;
            let rest = rest.trim_start().strip_prefix(',')?;
            let (second, rest) = Self::parse_prefix(rest)?;
            return Some((GroupSpec::product(first, second), rest));
        }
        let (kind, rest) = text.split_once(':')?;
        let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return None;
        }
        let n: usize = rest[..digits].parse().ok()?;
        let spec = match kind.trim() {
            "cyclic" => GroupSpec::Cyclic(n),
            "dihedral" => GroupSpec::Dihedral(n),
            _ => return None,
        };
        Some((spec, &rest[digits..]))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `cyclic:N`, `dihedral:N` and `product:<spec>,<spec>`; products
    /// nest to the left-most complete spec, e.g.
    /// `product:product:cyclic:2,cyclic:3,cyclic:5`.
    fn from_str(s: &str) -> Result<Self> {
        match Self::parse_prefix(s) {
            Some((spec, rest)) if rest.trim().is_empty() => {
                spec.check()?;
                Ok(spec)
            }
            _ => Err(Error::SpecParse(s.to_string())),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Product(a, b) => write!(f, "product:{a},{b}"),
        }
    }
}

/// A finite group with explicit multiplication and inverse tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    label: String,
}

impl FiniteGroup {
    /// Builds the group described by `spec`.
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        spec.check()?;
        let (order, mul) = build_table(spec)?;
        let identity = 0;
        let mut inv = vec![0; order];
        for (g, slot) in inv.iter_mut().enumerate() {
            *slot = (0..order)
                .find(|&h| mul[g * order + h] == identity)
                .expect("every element of a constructed group has an inverse");
        }
        Ok(Self { order, mul, inv, identity, label: spec.to_string() })
    }

    /// Parses and builds in one step.
    pub fn from_spec_str(spec: &str) -> Result<Self> {
        Self::build(&spec.parse()?)
    }

    /// Wraps raw tables without checking the group axioms; use
    /// [`FiniteGroup::validate`] to inspect such a table.
    pub fn from_tables(
        label: impl Into<String>,
        mul: Vec<Vec<usize>>,
        inv: Vec<usize>,
        identity: usize,
    ) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::InvalidSpec("empty multiplication table".into()));
        }
        if inv.len() != order {
            return Err(Error::LengthMismatch { expected: order, got: inv.len() });
        }
        let mut flat = Vec::with_capacity(order * order);
        for row in &mul {
            if row.len() != order {
                return Err(Error::LengthMismatch { expected: order, got: row.len() });
            }
            flat.extend_from_slice(row);
        }
        if let Some(&bad) = flat.iter().chain(inv.iter()).chain(std::iter::once(&identity)).find(|&&x| x >= order) {
            return Err(Error::ElementOutOfRange { index: bad, order });
        }
        Ok(Self { order, mul: flat, inv, identity, label: label.into() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// The spec string the group was built from.
    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: g, order: self.order })
        }
    }

    /// `g^k` for any integer `k`.
    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest `g != e` with `g * g = e`.
    pub fn find_order_two_element(&self) -> Option<usize> {
        self.elements().find(|&g| g != self.identity && self.mul(g, g) == self.identity)
    }

    /// Smallest `g` with `g != e` and `g * g != e`.
    pub fn find_order_ge3_element(&self) -> Option<usize> {
        self.elements().find(|&g| g != self.identity && self.mul(g, g) != self.identity)
    }

    /// Checks the group axioms, exhaustively up to order
    /// [`EXHAUSTIVE_VALIDATION_LIMIT`] and on random triples above it.
    pub fn validate(&self, seed: u64) -> ValidationReport {
        let n = self.order;
        let mut report =
            ValidationReport { order: n, exhaustive: n <= EXHAUSTIVE_VALIDATION_LIMIT, checks: Vec::new() };

        let assoc_fail = |(a, b, c): (usize, usize, usize)| self.mul(a, self.mul(b, c)) != self.mul(self.mul(a, b), c);
        let assoc = if report.exhaustive {
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).find(|&t| assoc_fail(t))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_TRIPLES)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find(|&t| assoc_fail(t))
        };
        report.push("associativity", assoc.map(|(a, b, c)| format!("({a}*{b})*{c} != {a}*({b}*{c})")));

        let e = self.identity;
        let ident = self.elements().find(|&g| self.mul(e, g) != g || self.mul(g, e) != g);
        report.push("identity", ident.map(|g| format!("identity {e} does not fix {g}")));

        let inverse = self.elements().find(|&g| self.mul(g, self.inv(g)) != e || self.mul(self.inv(g), g) != e);
        report.push("inverses", inverse.map(|g| format!("inv({g}) = {} is not an inverse", self.inv(g))));

        let translations = self.elements().find(|&g| {
            let mut seen = vec![false; n];
            self.elements().any(|h| std::mem::replace(&mut seen[self.mul(g, h)], true))
        });
        report.push("left_translations_bijective", translations.map(|g| format!("h -> {g}*h is not a permutation")));
        report
    }
}

fn build_table(spec: &GroupSpec) -> Result<(usize, Vec<usize>)> {
    match spec {
        GroupSpec::Cyclic(n) => {
            let n = *n;
            let mut t = Vec::with_capacity(n * n);
            for a in 0..n {
                t.extend((0..n).map(|b| (a + b) % n));
            }
            Ok((n, t))
        }
        GroupSpec::Dihedral(n) => {
            // r^k s^f has index k + n*f; s r^k = r^-k s.
            let n = *n;
            let order = 2 * n;
            let mut t = Vec::with_capacity(order * order);
            for x in 0..order {
                let (a, fx) = (x % n, x / n);
                for y in 0..order {
                    let (b, fy) = (y % n, y / n);
                    let k = if fx == 0 { (a + b) % n } else { (a + n - b) % n };
                    t.push(k + n * ((fx + fy) % 2));
                }
            }
            Ok((order, t))
        }
        GroupSpec::Product(left, right) => {
            let (n1, t1) = build_table(left)?;
            let (n2, t2) = build_table(right)?;
            let order = n1.checked_mul(n2).ok_or(Error::Overflow("group order"))?;
            let mut t = Vec::with_capacity(order * order);
            for x in 0..order {
                let (x1, x2) = (x / n2, x % n2);
                for y in 0..order {
                    let (y1, y2) = (y / n2, y % n2);
                    t.push(t1[x1 * n1 + y1] * n2 + t2[x2 * n2 + y2]);
                }
            }
            Ok((order, t))
        }
    }
}

/// Outcome of a single axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub order: usize,
    pub exhaustive: bool,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(AxiomCheck { name: name.into(), passed: failure.is_none(), failure });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}
