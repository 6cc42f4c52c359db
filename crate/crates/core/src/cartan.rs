//! Exterior calculus on polynomial forms over `R^d`.
//!
//! This module never touches the graded engine; it is the independent side
//! of every cross-check (de Rham differential, classical Dorfman brackets,
//! closure of twist data).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;

use crate::algebra::{ratio, Poly};
use crate::algebroid::Section;
use crate::error::{Error, Result};

/// Sorts an index list, returning `None` on a repeated index and otherwise
/// the sorted list and whether the permutation was odd.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for (k, a) in indices.iter().enumerate() {
        for b in &indices[k + 1..] {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut v = indices.to_vec();
    v.sort_unstable();
    Some((v, inversions % 2 == 1))
}

/// A differential form of fixed rank with polynomial components, stored on
/// strictly increasing index tuples (0-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm {
    nvars: usize,
    rank: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
}

impl DiffForm {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        DiffForm { nvars, rank, comps: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn scalar(f: Poly) -> Self {
        let mut out = Self::zero(f.nvars(), 0);
        out.add_component(Vec::new(), f);
        out
    }

    /// `coeff · dx^{i1} ∧ … ∧ dx^{ir}` with indices in any order.
    pub fn term(nvars: usize, indices: &[usize], coeff: Poly) -> Result<Self> {
        Self::from_components(nvars, indices.len(), [(indices.to_vec(), coeff)])
    }

    /// Builds a form from (possibly unsorted) index tuples; repeated indices
    /// contribute nothing.
    pub fn from_components(
        nvars: usize,
        rank: usize,
        comps: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut out = Self::zero(nvars, rank);
        for (idx, f) in comps {
            if idx.len() != rank {
                return Err(Error::RankMismatch { expected: rank, got: idx.len() });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= nvars) {
                return Err(Error::IndexOutOfRange { index: bad, bound: nvars });
            }
            out.add_unsorted(&idx, f);
        }
        Ok(out)
    }

    fn add_unsorted(&mut self, idx: &[usize], f: Poly) {
        if let Some((sorted, odd)) = sort_with_sign(idx) {
            self.add_component(sorted, if odd { -f } else { f });
        }
    }

    fn add_component(&mut self, idx: Vec<usize>, f: Poly) {
        if f.is_zero() {
            return;
        }
        match self.comps.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &f;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.comps.iter()
    }

    /// Component on a sorted index tuple.
    pub fn component(&self, idx: &[usize]) -> Poly {
        self.comps.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars, self.rank);
        for (i, f) in &self.comps {
            out.add_component(i.clone(), f.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, g: &Poly) -> Self {
        let mut out = Self::zero(self.nvars, self.rank);
        for (i, f) in &self.comps {
            out.add_component(i.clone(), f * g);
        }
        out
    }

    fn check_same_shape(&self, other: &DiffForm) {
        assert_eq!(self.nvars, other.nvars, "forms over different dimensions");
        assert_eq!(self.rank, other.rank, "forms of different rank");
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.comps.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let dx: String = idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
            if idx.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) dx[{dx}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm<{}>({self})", self.rank)
    }
}

impl Add for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.check_same_shape(rhs);
        let mut out = self.clone();
        for (i, f) in &rhs.comps {
            out.add_component(i.clone(), f.clone());
        }
        out
    }
}

impl Add for DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: DiffForm) -> DiffForm {
        &self + &rhs
    }
}

impl Sub for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self + &(-rhs)
    }
}

impl Sub for DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: DiffForm) -> DiffForm {
        &self - &rhs
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.rank);
        for (i, f) in &self.comps {
            out.add_component(i.clone(), -f);
        }
        out
    }
}

impl Neg for DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        -&self
    }
}

/// A polynomial vector field `v^μ ∂_μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField(pub Vec<Poly>);

impl VectorField {
    pub fn zero(nvars: usize) -> Self {
        VectorField(vec![Poly::zero(nvars); nvars])
    }

    /// The coordinate field `∂_μ` scaled by `coeff`.
    pub fn coordinate(nvars: usize, mu: usize, coeff: Poly) -> Self {
        let mut v = Self::zero(nvars);
        v.0[mu] = coeff;
        v
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// Directional derivative `v^μ ∂_μ f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(f.nvars());
        for (mu, vm) in self.0.iter().enumerate() {
            if !vm.is_zero() {
                out += &(vm * &f.partial_unchecked(mu));
            }
        }
        out
    }

    /// `[v, w]^μ = v(w^μ) - w(v^μ)`.
    pub fn lie_bracket(&self, w: &VectorField) -> VectorField {
        VectorField(
            self.0
                .iter()
                .zip(&w.0)
                .map(|(vm, wm)| &self.apply(wm) - &w.apply(vm))
                .collect(),
        )
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Exterior derivative.
pub fn ext_d(w: &DiffForm) -> DiffForm {
    let mut out = DiffForm::zero(w.nvars, w.rank + 1);
    for (idx, f) in &w.comps {
        for mu in 0..w.nvars {
            let df = f.partial_unchecked(mu);
            if df.is_zero() {
                continue;
            }
            let mut i2 = Vec::with_capacity(idx.len() + 1);
            i2.push(mu);
            i2.extend_from_slice(idx);
            out.add_unsorted(&i2, df);
        }
    }
    out
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> DiffForm {
    assert_eq!(a.nvars, b.nvars, "forms over different dimensions");
    let mut out = DiffForm::zero(a.nvars, a.rank + b.rank);
    for (i, f) in &a.comps {
        for (j, g) in &b.comps {
            let mut idx = i.clone();
            idx.extend_from_slice(j);
            out.add_unsorted(&idx, f * g);
        }
    }
    out
}

/// Interior product `ι_v ω`; zero on 0-forms.
pub fn interior(v: &VectorField, w: &DiffForm) -> DiffForm {
    if w.rank == 0 {
        return DiffForm::zero(w.nvars, 0);
    }
    let mut out = DiffForm::zero(w.nvars, w.rank - 1);
    for (idx, f) in &w.comps {
        for (k, &i) in idx.iter().enumerate() {
            if v.0[i].is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
            let c = &v.0[i] * f;
            out.add_component(rest, if k % 2 == 1 { -c } else { c });
        }
    }
    out
}

/// Lie derivative in components:
/// `(𝓛_v ω)_I = v^μ ∂_μ ω_I + Σ_k ∂_{i_k} v^μ ω_{i_1…μ…i_r}`.
pub fn lie_deriv(v: &VectorField, w: &DiffForm) -> DiffForm {
    let mut out = DiffForm::zero(w.nvars, w.rank);
    for (idx, f) in &w.comps {
        out.add_component(idx.clone(), v.apply(f));
        for k in 0..idx.len() {
            for mu in 0..w.nvars {
                let dv = v.0[idx[k]].partial_unchecked(mu);
                if dv.is_zero() {
                    continue;
                }
                let mut i2 = idx.clone();
                i2[k] = mu;
                out.add_unsorted(&i2, &dv * f);
            }
        }
    }
    out
}

/// Radial homotopy operator centred at the origin:
/// `K(x^α dx^I) = (|α| + r)^{-1} x^α ι_E dx^I` with `E = x^μ ∂_μ`.
/// On polynomial forms of rank at least one, `dK + Kd = id`.
pub fn homotopy(w: &DiffForm) -> Result<DiffForm> {
    if w.rank == 0 {
        return Err(Error::RankMismatch { expected: 1, got: 0 });
    }
    let n = w.nvars;
    let mut out = DiffForm::zero(n, w.rank - 1);
    for (idx, f) in &w.comps {
        for (alpha, c) in f.terms() {
            let weight: u32 = alpha.iter().sum::<u32>() + w.rank as u32;
            let coeff = c * ratio(1, i64::from(weight));
            for (k, &i) in idx.iter().enumerate() {
                let mut e = alpha.clone();
                e[i] += 1;
                let rest: Vec<usize> = idx.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
                let term = Poly::monomial(e, coeff.clone());
                out.add_component(rest, if k % 2 == 1 { -term } else { term });
            }
        }
    }
    Ok(out)
}

/// A primitive `κ` with `dκ = ω` for a closed polynomial form of rank ≥ 1.
pub fn poincare_primitive(w: &DiffForm) -> Result<DiffForm> {
    if w.rank == 0 {
        return Err(Error::RankMismatch { expected: 1, got: 0 });
    }
    if !ext_d(w).is_zero() {
        return Err(Error::NotClosed);
    }
    homotopy(w)
}

/// The classical Dorfman bracket on `T ⊕ Λ^k T*` (σ absent) or on
/// `T ⊕ Λ²T* ⊕ Λ⁵T*` (σ present):
///
/// ```text
/// L_A A' = 𝓛_v v' + (𝓛_v λ' - ι_{v'} dλ) + (𝓛_v σ' - ι_{v'} dσ - λ' ∧ dλ)
/// ```
pub fn classical_dorfman(a: &Section, b: &Section) -> Result<Section> {
    if a.lambda.rank() != b.lambda.rank() {
        return Err(Error::RankMismatch { expected: a.lambda.rank(), got: b.lambda.rank() });
    }
    let v = a.v.lie_bracket(&b.v);
    let lambda = &lie_deriv(&a.v, &b.lambda) - &interior(&b.v, &ext_d(&a.lambda));
    let sigma = match (&a.sigma, &b.sigma) {
        (None, None) => None,
        (Some(s), Some(s2)) => {
            let lin = &lie_deriv(&a.v, s2) - &interior(&b.v, &ext_d(s));
            Some(&lin - &wedge(&b.lambda, &ext_d(&a.lambda)))
        }
        (Some(s), None) | (None, Some(s)) => {
            return Err(Error::RankMismatch { expected: s.rank(), got: 0 });
        }
    };
    Ok(Section { v, lambda, sigma })
}
