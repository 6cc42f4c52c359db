//! Algebroid structure extracted from a hamiltonian by derived brackets:
//! Dorfman bracket, anchor, pairing, `ρ*`, module ranks, and the axiom
//! verification suites.

mod section;
mod verify;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::element::same_chart;
use crate::algebra::{ChartSpec, Generator, GradedElement, GradedMonomial, Poly};
use crate::cartan::{DiffForm, VectorField};
use crate::error::{Error, Result};
use crate::npq::{embed_form, expect_degree, Hamiltonian};
use crate::random::monomials_of_degree;
use crate::symplectic::poisson_unchecked;

pub use section::{decode_section, encode_section, Section, SIGMA_SIGN};
pub use verify::{verify_courant, verify_leibniz, COURANT_AXIOMS};

fn check_section_degree(theta: &Hamiltonian, a: &GradedElement) -> Result<()> {
    if !same_chart(theta.chart(), a.chart()) {
        return Err(Error::ChartMismatch);
    }
    expect_degree(a, theta.chart().p - 1)
}

/// `-(-1)^p`, the overall sign of the derived bracket and anchor.
pub fn derived_sign(p: u32) -> BigRational {
    if p.is_multiple_of(2) { -BigRational::one() } else { BigRational::one() }
}

/// Derived Dorfman bracket `L_A B = -(-1)^p ((Θ, A), B)` on degree `p - 1`.
pub fn dorfman(theta: &Hamiltonian, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    check_section_degree(theta, a)?;
    check_section_degree(theta, b)?;
    Ok(dorfman_unchecked(theta, a, b))
}

pub(crate) fn dorfman_unchecked(theta: &Hamiltonian, a: &GradedElement, b: &GradedElement) -> GradedElement {
    let qa = poisson_unchecked(theta.element(), a);
    poisson_unchecked(&qa, b).scale(&derived_sign(theta.chart().p))
}

/// `ρ(A)·f = -(-1)^p ((Θ, A), f)` for a degree-0 function `f`.
pub fn anchor(theta: &Hamiltonian, a: &GradedElement, f: &Poly) -> Result<Poly> {
    check_section_degree(theta, a)?;
    if f.nvars() != theta.chart().d {
        return Err(Error::Shape("function lives on a different base".into()));
    }
    Ok(anchor_unchecked(theta, a, f))
}

pub(crate) fn anchor_unchecked(theta: &Hamiltonian, a: &GradedElement, f: &Poly) -> Poly {
    let chart = theta.chart();
    let qa = poisson_unchecked(theta.element(), a);
    let r = poisson_unchecked(&qa, &GradedElement::scalar(chart, f.clone())).scale(&derived_sign(chart.p));
    debug_assert!(r.terms().all(|(m, _)| m.is_one()));
    r.coefficient(&GradedMonomial::one(chart))
}

/// The vector field `ρ(A)`, read off its action on coordinates.
pub fn anchor_vector(theta: &Hamiltonian, a: &GradedElement) -> Result<VectorField> {
    check_section_degree(theta, a)?;
    let d = theta.chart().d;
    (0..d)
        .map(|mu| Ok(anchor_unchecked(theta, a, &Poly::var(d, mu)?)))
        .collect::<Result<Vec<_>>>()
        .map(VectorField)
}

/// Poisson pairing of two sections; degree `p - 2`.
pub fn pairing(a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    if !same_chart(a.chart(), b.chart()) {
        return Err(Error::ChartMismatch);
    }
    let p = a.chart().p;
    expect_degree(a, p - 1)?;
    expect_degree(b, p - 1)?;
    Ok(poisson_unchecked(a, b))
}

/// `ρ*: T* → E` on a `p = 2` chart, the `ψ`-embedding of a 1-form.
pub fn rho_star(chart: &Arc<ChartSpec>, lambda: &DiffForm) -> Result<GradedElement> {
    if chart.is_m5() || chart.p != 2 {
        return Err(Error::WrongChartKind("ρ* is defined on p = 2 Vinogradov charts".into()));
    }
    if lambda.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, got: lambda.rank() });
    }
    embed_form(chart, lambda)
}

/// Result of a module-table query; `warning` is set for `n = p`, which is a
/// space of functions but not one of the algebroid modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBasis {
    pub n: u32,
    pub basis: Vec<GradedMonomial>,
    pub warning: Option<String>,
}

fn check_module_degree(chart: &ChartSpec, n: u32) -> Result<Option<String>> {
    if n > chart.p {
        return Err(Error::ModuleDegree { n, p: chart.p });
    }
    Ok((n == chart.p).then(|| format!("degree {n} equals p; it is not one of the modules below p")))
}

/// `x`-free generator monomials of total degree `n ≤ p`, canonical order.
pub fn module_basis(chart: &ChartSpec, n: u32) -> Result<ModuleBasis> {
    let warning = check_module_degree(chart, n)?;
    Ok(ModuleBasis { n, basis: monomials_of_degree(chart, n), warning })
}

/// Rank of the degree-`n` module as a free `C(M)`-module.
pub fn module_rank(chart: &ChartSpec, n: u32) -> Result<usize> {
    Ok(module_basis(chart, n)?.basis.len())
}

/// Renders a module basis with generator names.
pub fn render_basis(chart: &ChartSpec, basis: &[GradedMonomial]) -> Vec<String> {
    basis.iter().map(|m| if m.is_one() { "1".into() } else { m.render(chart) }).collect()
}

/// Pure `χ` element `v^μ χ_μ` of a vector field.
pub fn embed_vector(chart: &Arc<ChartSpec>, v: &VectorField) -> Result<GradedElement> {
    let mut out = GradedElement::zero(chart);
    for (mu, c) in v.0.iter().enumerate() {
        let chi = GradedElement::generator(chart, Generator::Chi(mu))?;
        out = out + chi.mul_poly(c);
    }
    Ok(out)
}
