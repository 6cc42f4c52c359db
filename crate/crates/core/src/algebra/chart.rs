//! Darboux charts of the two supported supermanifolds.
//!
//! Coordinates are ordered `x`-block, `ψ`-block, `ζ`, `χ`-block, `p`-block,
//! each ascending by index. `x` coordinates have degree zero and live in the
//! polynomial coefficients; every other generator gets a dense position in
//! that order, used as the exponent slot of a [`GradedMonomial`].
//!
//! [`GradedMonomial`]: super::GradedMonomial

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChartKind {
    /// `T*[p]T[1]R^d`.
    Vinogradov { d: usize, p: u32 },
    /// `T*[6]T[1]R^d × R[3]`.
    M5 { d: usize },
}

impl ChartKind {
    pub fn d(&self) -> usize {
        match *self {
            ChartKind::Vinogradov { d, .. } | ChartKind::M5 { d } => d,
        }
    }

    pub fn p(&self) -> u32 {
        match *self {
            ChartKind::Vinogradov { p, .. } => p,
            ChartKind::M5 { .. } => 6,
        }
    }

    pub fn is_m5(&self) -> bool {
        matches!(self, ChartKind::M5 { .. })
    }
}

/// Generator families. Variant order is the canonical block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    X,
    Psi,
    Zeta,
    Chi,
    P,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::Psi => "ψ",
            Family::Zeta => "ζ",
            Family::Chi => "χ",
            Family::P => "p",
        }
    }
}

/// A single coordinate. Indices are 0-based; rendering adds one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    Psi(usize),
    Zeta,
    Chi(usize),
    P(usize),
}

impl Generator {
    pub fn family(self) -> Family {
        match self {
            Generator::X(_) => Family::X,
            Generator::Psi(_) => Family::Psi,
            Generator::Zeta => Family::Zeta,
            Generator::Chi(_) => Family::Chi,
            Generator::P(_) => Family::P,
        }
    }

    fn index(self) -> usize {
        match self {
            Generator::X(i) | Generator::Psi(i) | Generator::Chi(i) | Generator::P(i) => i,
            Generator::Zeta => 0,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Zeta => write!(f, "ζ"),
            g => write!(f, "{}{}", g.family().symbol(), g.index() + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorFamily {
    pub family: Family,
    pub multiplicity: usize,
    pub degree: u32,
    /// `true` for odd generators; always `degree % 2 == 1`.
    pub odd: bool,
}

/// `(left^μ, right_ν) = constant · δ^μ_ν`. The reversed bracket follows from
/// graded symmetry and is not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DarbouxPair {
    pub left: Family,
    pub right: Family,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub constant: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub d: usize,
    pub p: u32,
    pub families: Vec<GeneratorFamily>,
    pub pairing: Vec<DarbouxPair>,
}

/// Builds a chart after validating `d ≥ 1` and `p ≥ 2`.
pub fn make_chart(kind: ChartKind) -> Result<Arc<ChartSpec>> {
    let d = kind.d();
    let p = kind.p();
    if d < 1 {
        return Err(Error::InvalidChart(format!("dimension d must be at least 1, got {d}")));
    }
    if p < 2 {
        return Err(Error::InvalidChart(format!("symplectic degree p must be at least 2, got {p}")));
    }
    let fam = |family, multiplicity, degree: u32| GeneratorFamily {
        family,
        multiplicity,
        degree,
        odd: degree % 2 == 1,
    };
    let mut families = vec![fam(Family::X, d, 0), fam(Family::Psi, d, 1)];
    if kind.is_m5() {
        families.push(fam(Family::Zeta, 1, 3));
    }
    families.push(fam(Family::Chi, d, p - 1));
    families.push(fam(Family::P, d, p));

    let mut pairing = vec![
        DarbouxPair { left: Family::X, right: Family::P, constant: BigRational::one() },
        DarbouxPair { left: Family::Psi, right: Family::Chi, constant: BigRational::one() },
    ];
    if kind.is_m5() {
        pairing.push(DarbouxPair { left: Family::Zeta, right: Family::Zeta, constant: BigRational::one() });
    }
    Ok(Arc::new(ChartSpec { kind, d, p, families, pairing }))
}

impl ChartSpec {
    pub fn is_m5(&self) -> bool {
        self.kind.is_m5()
    }

    pub fn family(&self, f: Family) -> Option<&GeneratorFamily> {
        self.families.iter().find(|g| g.family == f)
    }

    pub fn degree_of(&self, g: Generator) -> u32 {
        match g.family() {
            Family::X => 0,
            Family::Psi => 1,
            Family::Zeta => 3,
            Family::Chi => self.p - 1,
            Family::P => self.p,
        }
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::Zeta => self.is_m5(),
            Generator::X(i) | Generator::Psi(i) | Generator::Chi(i) | Generator::P(i) => i < self.d,
        }
    }

    /// Number of positive-degree generators (exponent slots of a monomial).
    pub fn slot_count(&self) -> usize {
        3 * self.d + usize::from(self.is_m5())
    }

    fn chi_offset(&self) -> usize {
        self.d + usize::from(self.is_m5())
    }

    fn p_offset(&self) -> usize {
        self.chi_offset() + self.d
    }

    /// Slot of a positive-degree generator; `None` for `x` coordinates.
    pub fn slot(&self, g: Generator) -> Option<usize> {
        match g {
            Generator::X(_) => None,
            Generator::Psi(i) => Some(i),
            Generator::Zeta => Some(self.d),
            Generator::Chi(i) => Some(self.chi_offset() + i),
            Generator::P(i) => Some(self.p_offset() + i),
        }
    }

    pub fn generator_at(&self, slot: usize) -> Generator {
        let d = self.d;
        if slot < d {
            Generator::Psi(slot)
        } else if self.is_m5() && slot == d {
            Generator::Zeta
        } else if slot < self.p_offset() {
            Generator::Chi(slot - self.chi_offset())
        } else {
            Generator::P(slot - self.p_offset())
        }
    }

    pub fn slot_degree(&self, slot: usize) -> u32 {
        self.degree_of(self.generator_at(slot))
    }

    pub fn slot_is_odd(&self, slot: usize) -> bool {
        self.slot_degree(slot) % 2 == 1
    }

    /// All generators of the chart in canonical order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = (0..self.d).map(Generator::X).collect();
        out.extend((0..self.slot_count()).map(|s| self.generator_at(s)));
        out
    }

    /// Highest generator degree; equals `p` on every supported chart.
    pub fn max_generator_degree(&self) -> u32 {
        self.families.iter().map(|f| f.degree).max().unwrap_or(0)
    }

    /// The bracket `(a, b)` of two generators, read off the pairing table
    /// and extended by graded symmetry
    /// `(a, b) = -(-1)^{(|a|-p)(|b|-p)} (b, a)`.
    pub fn generator_bracket(&self, a: Generator, b: Generator) -> BigRational {
        if !self.contains(a) || !self.contains(b) {
            return BigRational::zero();
        }
        let same_index = a.index() == b.index();
        for pair in &self.pairing {
            if a.family() == pair.left && b.family() == pair.right && same_index {
                return pair.constant.clone();
            }
        }
        for pair in &self.pairing {
            if b.family() == pair.left && a.family() == pair.right && same_index {
                let p = i64::from(self.p);
                let e = (i64::from(self.degree_of(a)) - p) * (i64::from(self.degree_of(b)) - p);
                return if e.rem_euclid(2) == 0 { -pair.constant.clone() } else { pair.constant.clone() };
            }
        }
        BigRational::zero()
    }

    /// Nonzero generator brackets between positive-degree generators, as
    /// `(slot_a, slot_b, (a, b))`.
    pub(crate) fn slot_pairs(&self) -> Vec<(usize, usize, BigRational)> {
        let mut out = Vec::new();
        for a in 0..self.slot_count() {
            for b in 0..self.slot_count() {
                let c = self.generator_bracket(self.generator_at(a), self.generator_at(b));
                if !c.is_zero() {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// `(x^μ, p_μ)` and `(p_μ, x^μ)`.
    pub(crate) fn xp_constants(&self) -> (BigRational, BigRational) {
        (
            self.generator_bracket(Generator::X(0), Generator::P(0)),
            self.generator_bracket(Generator::P(0), Generator::X(0)),
        )
    }
}
