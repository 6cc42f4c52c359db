//! Functions on the graded manifold: finite sums of canonical graded
//! monomials with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::chart::{ChartSpec, Generator};
use super::poly::{rat, Poly};
use crate::error::{Error, Result};

/// Exponents of the positive-degree generators, indexed by chart slot.
/// Odd slots only ever hold 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedMonomial(Vec<u8>);

impl GradedMonomial {
    pub fn one(chart: &ChartSpec) -> Self {
        GradedMonomial(vec![0; chart.slot_count()])
    }

    /// Builds a monomial from exponents; returns `None` if an odd slot has
    /// exponent above one.
    pub fn from_exponents(chart: &ChartSpec, exps: Vec<u8>) -> Option<Self> {
        assert_eq!(exps.len(), chart.slot_count());
        exps.iter()
            .enumerate()
            .all(|(s, &e)| e <= 1 || !chart.slot_is_odd(s))
            .then_some(GradedMonomial(exps))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn exponent(&self, slot: usize) -> u8 {
        self.0[slot]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Odd generators present, in canonical order.
    pub fn odd_part(&self, chart: &ChartSpec) -> Vec<Generator> {
        (0..self.0.len())
            .filter(|&s| self.0[s] == 1 && chart.slot_is_odd(s))
            .map(|s| chart.generator_at(s))
            .collect()
    }

    /// Even positive-degree generators with their exponents.
    pub fn even_part(&self, chart: &ChartSpec) -> Vec<(Generator, u8)> {
        (0..self.0.len())
            .filter(|&s| self.0[s] > 0 && !chart.slot_is_odd(s))
            .map(|s| (chart.generator_at(s), self.0[s]))
            .collect()
    }

    pub fn degree(&self, chart: &ChartSpec) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(s, &e)| u32::from(e) * chart.slot_degree(s))
            .sum()
    }

    fn odd_slots<'a>(&'a self, chart: &'a ChartSpec) -> impl Iterator<Item = usize> + 'a {
        (0..self.0.len()).filter(move |&s| self.0[s] == 1 && chart.slot_is_odd(s))
    }

    /// Sum of exponents over the given slots.
    pub fn count_in(&self, slots: impl Iterator<Item = usize>) -> u32 {
        slots.map(|s| u32::from(self.0[s])).sum()
    }

    pub fn render(&self, chart: &ChartSpec) -> String {
        let mut out = String::new();
        for (s, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            out.push_str(&chart.generator_at(s).to_string());
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
        out
    }
}

/// Product of two canonical monomials: `None` when an odd generator repeats,
/// otherwise the canonical product and whether reordering flipped the sign.
pub(crate) fn mul_monomials(
    chart: &ChartSpec,
    a: &GradedMonomial,
    b: &GradedMonomial,
) -> Option<(GradedMonomial, bool)> {
    let mut negative = false;
    for j in b.odd_slots(chart) {
        if a.0[j] == 1 {
            return None;
        }
        let passed = a.odd_slots(chart).filter(|&i| i > j).count();
        negative ^= passed % 2 == 1;
    }
    let exps = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    Some((GradedMonomial(exps), negative))
}

/// Degree of an element: the eigenvalue of the Euler vector field when there
/// is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(u32),
    Inhomogeneous,
}

impl Degree {
    pub fn value(self) -> Option<u32> {
        match self {
            Degree::Homogeneous(n) => Some(n),
            Degree::Inhomogeneous => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Homogeneous(n) => write!(f, "{n}"),
            Degree::Inhomogeneous => write!(f, "inhomogeneous"),
        }
    }
}

/// An element of the function algebra of a chart.
#[derive(Clone)]
pub struct GradedElement {
    chart: Arc<ChartSpec>,
    terms: BTreeMap<GradedMonomial, Poly>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

pub(crate) fn same_chart(a: &Arc<ChartSpec>, b: &Arc<ChartSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedElement {
    pub fn zero(chart: &Arc<ChartSpec>) -> Self {
        GradedElement { chart: chart.clone(), terms: BTreeMap::new() }
    }

    /// A degree-zero element `q(x)`.
    pub fn scalar(chart: &Arc<ChartSpec>, q: Poly) -> Self {
        Self::monomial(chart, GradedMonomial::one(chart), q)
    }

    pub fn monomial(chart: &Arc<ChartSpec>, m: GradedMonomial, q: Poly) -> Self {
        let mut e = Self::zero(chart);
        e.add_term(m, q);
        e
    }

    /// A single coordinate function.
    pub fn generator(chart: &Arc<ChartSpec>, g: Generator) -> Result<Self> {
        if !chart.contains(g) {
            return Err(Error::UnknownGenerator(g.to_string()));
        }
        let d = chart.d;
        Ok(match chart.slot(g) {
            None => {
                let Generator::X(i) = g else { unreachable!() };
                Self::scalar(chart, Poly::var(d, i)?)
            }
            Some(s) => {
                let mut m = GradedMonomial::one(chart);
                m.0[s] = 1;
                Self::monomial(chart, m, Poly::one(d))
            }
        })
    }

    pub fn chart(&self) -> &Arc<ChartSpec> {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&GradedMonomial, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coefficient(&self, m: &GradedMonomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_else(|| Poly::zero(self.chart.d))
    }

    pub(crate) fn add_term(&mut self, m: GradedMonomial, q: Poly) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_assign_ref(&mut self, other: &GradedElement) {
        assert!(same_chart(&self.chart, &other.chart), "chart mismatch in addition");
        for (m, q) in &other.terms {
            self.add_term(m.clone(), q.clone());
        }
    }

    pub(crate) fn sub_assign_ref(&mut self, other: &GradedElement) {
        assert!(same_chart(&self.chart, &other.chart), "chart mismatch in subtraction");
        for (m, q) in &other.terms {
            self.add_term(m.clone(), -q);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        GradedElement {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q.scale(c))).collect(),
        }
    }

    /// Multiplies every coefficient by a degree-zero function.
    pub fn mul_poly(&self, q: &Poly) -> Self {
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * q);
        }
        out
    }

    pub fn euler_degree(&self) -> Degree {
        let mut degs = self.terms.keys().map(|m| m.degree(&self.chart));
        match degs.next() {
            None => Degree::Homogeneous(0),
            Some(first) => {
                if degs.all(|d| d == first) {
                    Degree::Homogeneous(first)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }


    /// Homogeneous part of degree `n`.
    pub fn component(&self, n: u32) -> Self {
        GradedElement {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(&self.chart) == n)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// All nonzero homogeneous components, ascending by degree.
    pub fn components(&self) -> BTreeMap<u32, GradedElement> {
        let mut out: BTreeMap<u32, GradedElement> = BTreeMap::new();
        for (m, q) in &self.terms {
            out.entry(m.degree(&self.chart))
                .or_insert_with(|| Self::zero(&self.chart))
                .add_term(m.clone(), q.clone());
        }
        out
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&GradedMonomial) -> bool) -> Self {
        GradedElement {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// Right derivative `f ∂←/∂z` for a positive-degree generator slot.
    pub(crate) fn right_derivative(&self, slot: usize) -> Self {
        self.derivative(slot, false)
    }

    /// Left derivative `∂→/∂z f` for a positive-degree generator slot.
    pub(crate) fn left_derivative(&self, slot: usize) -> Self {
        self.derivative(slot, true)
    }

    fn derivative(&self, slot: usize, left: bool) -> Self {
        let chart = &self.chart;
        let odd = chart.slot_is_odd(slot);
        let mut out = Self::zero(chart);
        for (m, q) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[slot] = e - 1;
            if odd {
                let passed = m
                    .odd_slots(chart)
                    .filter(|&s| if left { s < slot } else { s > slot })
                    .count();
                out.add_term(m2, if passed % 2 == 1 { -q } else { q.clone() });
            } else {
                out.add_term(m2, q.scale(&rat(i64::from(e))));
            }
        }
        out
    }

    /// Partial derivative along `x^{var+1}`, acting on coefficients.
    pub fn x_partial(&self, var: usize) -> Result<Self> {
        if var >= self.chart.d {
            return Err(Error::IndexOutOfRange { index: var, bound: self.chart.d });
        }
        Ok(self.x_partial_unchecked(var))
    }

    pub(crate) fn x_partial_unchecked(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q.partial_unchecked(var));
        }
        out
    }

    /// Multiplication without the chart check.
    pub(crate) fn mul_unchecked(&self, other: &GradedElement) -> Self {
        let chart = &self.chart;
        let mut out = Self::zero(chart);
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                if let Some((m, neg)) = mul_monomials(chart, m1, m2) {
                    let q = q1 * q2;
                    out.add_term(m, if neg { -q } else { q });
                }
            }
        }
        out
    }

    /// The `n` largest monomials (canonical order), rendered; used as
    /// failure witnesses.
    pub fn witnesses(&self, n: usize) -> Vec<String> {
        self.terms
            .iter()
            .rev()
            .take(n)
            .map(|(m, q)| render_term(&self.chart, m, q))
            .collect()
    }
}

/// Graded-commutative product `f · g`.
pub fn gmul(f: &GradedElement, g: &GradedElement) -> Result<GradedElement> {
    if !same_chart(&f.chart, &g.chart) {
        return Err(Error::ChartMismatch);
    }
    Ok(f.mul_unchecked(g))
}

/// Builds an element from products of generators in arbitrary order,
/// reordering each product canonically and collecting Koszul signs.
pub fn normalize(chart: &Arc<ChartSpec>, raw: &[(Vec<Generator>, Poly)]) -> Result<GradedElement> {
    let d = chart.d;
    let mut out = GradedElement::zero(chart);
    'terms: for (seq, coeff) in raw {
        let mut q = coeff.clone();
        let mut slots = Vec::new();
        for &g in seq {
            if !chart.contains(g) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
            match chart.slot(g) {
                None => {
                    let Generator::X(i) = g else { unreachable!() };
                    q = &q * &Poly::var(d, i)?;
                }
                Some(s) => slots.push(s),
            }
        }
        let odd: Vec<usize> = slots.iter().copied().filter(|&s| chart.slot_is_odd(s)).collect();
        let mut inversions = 0usize;
        for i in 0..odd.len() {
            for j in i + 1..odd.len() {
                if odd[i] == odd[j] {
                    continue 'terms;
                }
                if odd[i] > odd[j] {
                    inversions += 1;
                }
            }
        }
        let mut m = GradedMonomial::one(chart);
        for s in slots {
            m.0[s] += 1;
        }
        out.add_term(m, if inversions % 2 == 1 { -q } else { q });
    }
    Ok(out)
}

fn render_term(chart: &ChartSpec, m: &GradedMonomial, q: &Poly) -> String {
    let mono = m.render(chart);
    if mono.is_empty() {
        return q.to_string();
    }
    match q.as_constant() {
        Some(c) if c.is_one() => mono,
        Some(c) if (-c.clone()).is_one() => format!("-{mono}"),
        _ if q.len() == 1 => format!("{q}·{mono}"),
        _ => format!("({q})·{mono}"),
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let t = render_term(&self.chart, m, q);
            match (i, t.strip_prefix('-')) {
                (0, _) => write!(f, "{t}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement({self})")
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(mut self, rhs: GradedElement) -> GradedElement {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(mut self, rhs: GradedElement) -> GradedElement {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}
