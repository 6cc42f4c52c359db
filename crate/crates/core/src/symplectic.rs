//! The degree `-p` graded Poisson bracket of a Darboux chart and the finite
//! symplectomorphisms `exp((R, -))`.
//!
//! With constant pairing table `ω^{ab} = (z^a, z^b)` the bracket is
//!
//! ```text
//! (f, g) = Σ_{a,b} (f ∂←/∂z^a) ω^{ab} (∂→/∂z^b g)
//! ```
//!
//! which is a right derivation in `f` and a left derivation in `g`. The
//! table itself is fixed by the chart; its graded symmetry
//! `(f, g) = -(-1)^{(|f|-p)(|g|-p)} (g, f)` is what makes `(ψ, χ)` symmetric
//! for even `p` and antisymmetric for odd `p`.

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::element::same_chart;
use crate::algebra::{Degree, Family, GradedElement};
use crate::error::{Error, Result};

/// Default cap on adjoint iterations when termination cannot be read off `R`.
pub const DEFAULT_GAUGE_ITERATIONS: usize = 16;

/// Graded Poisson bracket `(f, g)`, extended bilinearly to inhomogeneous
/// arguments.
pub fn poisson(f: &GradedElement, g: &GradedElement) -> Result<GradedElement> {
    if !same_chart(f.chart(), g.chart()) {
        return Err(Error::ChartMismatch);
    }
    Ok(poisson_unchecked(f, g))
}

pub(crate) fn poisson_unchecked(f: &GradedElement, g: &GradedElement) -> GradedElement {
    let chart = f.chart().clone();
    let mut out = GradedElement::zero(&chart);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    let d = chart.d;
    let (xp, px) = chart.xp_constants();
    let p_slot = |mu| chart.slot(crate::algebra::Generator::P(mu)).unwrap();

    for mu in 0..d {
        let s = p_slot(mu);
        // (x^μ, p_μ) pairing: f ∂/∂x^μ times ∂→/∂p_μ g
        let dg = g.left_derivative(s);
        if !dg.is_zero() {
            let df = f.x_partial_unchecked(mu);
            if !df.is_zero() {
                out.add_assign_ref(&df.mul_unchecked(&dg).scale(&xp));
            }
        }
        // (p_μ, x^μ) pairing
        let df = f.right_derivative(s);
        if !df.is_zero() {
            let dg = g.x_partial_unchecked(mu);
            if !dg.is_zero() {
                out.add_assign_ref(&df.mul_unchecked(&dg).scale(&px));
            }
        }
    }
    for (a, b, c) in chart.slot_pairs() {
        let ga = chart.generator_at(a).family();
        if ga == Family::P {
            continue;
        }
        let df = f.right_derivative(a);
        if df.is_zero() {
            continue;
        }
        let dg = g.left_derivative(b);
        if dg.is_zero() {
            continue;
        }
        out.add_assign_ref(&df.mul_unchecked(&dg).scale(&c));
    }
    out
}

/// `exp(ad_R)(f) = Σ_k ad_R^k(f) / k!` with `ad_R = (R, -)`.
///
/// `R` must be homogeneous of degree `p`. When `R` does not depend on the
/// `p`, `χ` (or `ζ`) generators every application of `ad_R` lowers the total
/// exponent of those generators in `f`, so the series stops after at most
/// that many steps; otherwise at most `max_iterations` terms are tried.
pub fn gauge_exp(r: &GradedElement, f: &GradedElement, max_iterations: usize) -> Result<GradedElement> {
    if !same_chart(r.chart(), f.chart()) {
        return Err(Error::ChartMismatch);
    }
    if r.is_zero() {
        return Ok(f.clone());
    }
    let chart = r.chart().clone();
    match r.euler_degree() {
        Degree::Homogeneous(n) if n == chart.p => {}
        Degree::Homogeneous(n) => return Err(Error::DegreeMismatch { expected: chart.p, got: n.to_string() }),
        Degree::Inhomogeneous => return Err(Error::Inhomogeneous),
    }
    let lowering: Vec<usize> = (0..chart.slot_count())
        .filter(|&s| matches!(chart.generator_at(s).family(), Family::P | Family::Chi | Family::Zeta))
        .collect();
    let r_lowers = r.terms().all(|(m, _)| m.count_in(lowering.iter().copied()) == 0);
    let budget = if r_lowers {
        f.terms()
            .map(|(m, _)| m.count_in(lowering.iter().copied()) as usize)
            .max()
            .unwrap_or(0)
            + 1
    } else {
        max_iterations
    };

    let mut total = f.clone();
    let mut term = f.clone();
    let mut factorial = BigRational::one();
    for k in 1..=budget {
        term = poisson_unchecked(r, &term);
        if term.is_zero() {
            return Ok(total);
        }
        factorial *= BigRational::from_integer(k.into());
        total.add_assign_ref(&term.scale(&(BigRational::one() / &factorial)));
    }
    if poisson_unchecked(r, &term).is_zero() {
        Ok(total)
    } else {
        Err(Error::GaugeBudgetExceeded(budget))
    }
}

/// Sign `(-1)^n` as a rational.
pub(crate) fn sign(n: u32) -> BigRational {
    if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `-(-1)^{(|f|-p)(|g|-p)}`, the graded-symmetry factor for homogeneous
/// degrees.
pub fn symmetry_factor(p: u32, deg_f: u32, deg_g: u32) -> BigRational {
    let e = (i64::from(deg_f) - i64::from(p)) * (i64::from(deg_g) - i64::from(p));
    -sign(e.rem_euclid(2) as u32)
}
