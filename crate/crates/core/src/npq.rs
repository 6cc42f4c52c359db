//! Homological hamiltonians: normal-form builders, the vector field
//! `Q = (Θ, -)`, the master equation and twist classification helpers.

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{ratio, ChartSpec, Degree, Generator, GradedElement, GradedMonomial, Poly};
use crate::cartan::{ext_d, poincare_primitive, wedge, DiffForm};
use crate::error::{Error, Result};
use crate::random::{random_homogeneous, trial_rng, RandomSpec};
use crate::report::{CheckOutcome, Report};
use crate::symplectic::poisson_unchecked;

/// Coefficient of `ζ F₄` in the M5 hamiltonian.
pub const M5_F4_COEFF: i64 = 1;

/// Coefficient of `F₇` in the M5 hamiltonian, fixed so that the master
/// equation reads `dF₇ + ½ F₄∧F₄ = 0` with the wedge and `d` of
/// [`crate::cartan`] (see the `m5_calibration` test).
pub const M5_F7_COEFF: i64 = -1;

/// Twist data carried alongside the hamiltonian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Twist {
    None,
    Beta(DiffForm),
    M5 { f4: DiffForm, f7: DiffForm },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hamiltonian {
    chart: Arc<ChartSpec>,
    element: GradedElement,
    twist: Twist,
}

impl Hamiltonian {
    pub fn chart(&self) -> &Arc<ChartSpec> {
        &self.chart
    }

    pub fn element(&self) -> &GradedElement {
        &self.element
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// `Θ₀ = ψ^μ p_μ` on any chart.
    pub fn untwisted(chart: &Arc<ChartSpec>) -> Self {
        Hamiltonian { chart: chart.clone(), element: kinetic_term(chart), twist: Twist::None }
    }
}

/// `Σ_μ ψ^μ p_μ`.
pub fn kinetic_term(chart: &Arc<ChartSpec>) -> GradedElement {
    let mut out = GradedElement::zero(chart);
    for mu in 0..chart.d {
        let mut e = vec![0u8; chart.slot_count()];
        e[chart.slot(Generator::Psi(mu)).unwrap()] = 1;
        e[chart.slot(Generator::P(mu)).unwrap()] = 1;
        let m = GradedMonomial::from_exponents(chart, e).unwrap();
        out.add_term(m, Poly::one(chart.d));
    }
    out
}

fn psi_monomial(chart: &ChartSpec, idx: &[usize]) -> GradedMonomial {
    let mut e = vec![0u8; chart.slot_count()];
    for &i in idx {
        e[chart.slot(Generator::Psi(i)).unwrap()] = 1;
    }
    GradedMonomial::from_exponents(chart, e).unwrap()
}

/// Sends `ω_I dx^I` (sorted `I`) to `ω_I ψ^I` with coefficient one.
pub fn embed_form(chart: &Arc<ChartSpec>, w: &DiffForm) -> Result<GradedElement> {
    if w.nvars() != chart.d {
        return Err(Error::Shape(format!("form over {} variables on a chart of dimension {}", w.nvars(), chart.d)));
    }
    let mut out = GradedElement::zero(chart);
    for (idx, f) in w.components() {
        out.add_term(psi_monomial(chart, idx), f.clone());
    }
    Ok(out)
}

/// Reads back the rank-`rank` form from the pure-`ψ` part of an element.
/// Terms involving any other generator are ignored.
pub fn psi_form(f: &GradedElement, rank: usize) -> DiffForm {
    let chart = f.chart();
    let psi_slots: Vec<usize> = (0..chart.d).map(|i| chart.slot(Generator::Psi(i)).unwrap()).collect();
    let comps = f.terms().filter_map(|(m, q)| {
        let pure = (0..chart.slot_count()).all(|s| m.exponent(s) == 0 || psi_slots.contains(&s));
        let idx: Vec<usize> = (0..chart.d).filter(|&i| m.exponent(psi_slots[i]) == 1).collect();
        (pure && idx.len() == rank).then(|| (idx, q.clone()))
    });
    DiffForm::from_components(chart.d, rank, comps).expect("sorted in-range indices")
}

/// `Θ = ψ^μ p_μ + β_I ψ^I` on a Vinogradov chart; `β` has rank `p + 1`.
pub fn theta_vinogradov(chart: &Arc<ChartSpec>, beta: &DiffForm) -> Result<Hamiltonian> {
    if chart.is_m5() {
        return Err(Error::WrongChartKind("a β twist needs a Vinogradov chart".into()));
    }
    let rank = chart.p as usize + 1;
    if beta.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, got: beta.rank() });
    }
    let element = &kinetic_term(chart) + &embed_form(chart, beta)?;
    Ok(Hamiltonian { chart: chart.clone(), element, twist: Twist::Beta(beta.clone()) })
}

/// `Θ = ψ^μ p_μ + c₇ F₇ψ⁷ + c₄ ζ F₄ψ⁴` on an M5 chart.
pub fn theta_m5(chart: &Arc<ChartSpec>, f4: &DiffForm, f7: &DiffForm) -> Result<Hamiltonian> {
    if !chart.is_m5() {
        return Err(Error::WrongChartKind("F₄/F₇ twists need an M5 chart".into()));
    }
    if f4.rank() != 4 {
        return Err(Error::RankMismatch { expected: 4, got: f4.rank() });
    }
    if f7.rank() != 7 {
        return Err(Error::RankMismatch { expected: 7, got: f7.rank() });
    }
    let zeta = GradedElement::generator(chart, Generator::Zeta)?;
    let f4_term = zeta.mul_unchecked(&embed_form(chart, f4)?).scale(&BigRational::from_integer(M5_F4_COEFF.into()));
    let f7_term = embed_form(chart, f7)?.scale(&BigRational::from_integer(M5_F7_COEFF.into()));
    let element = &(&kinetic_term(chart) + &f7_term) + &f4_term;
    Ok(Hamiltonian {
        chart: chart.clone(),
        element,
        twist: Twist::M5 { f4: f4.clone(), f7: f7.clone() },
    })
}

/// `((Θ, Θ), (Θ, Θ) == 0)`.
pub fn master_equation(theta: &Hamiltonian) -> (GradedElement, bool) {
    let tt = poisson_unchecked(&theta.element, &theta.element);
    let ok = tt.is_zero();
    (tt, ok)
}

/// `Q(f) = (Θ, f)`.
pub fn q_apply(theta: &Hamiltonian, f: &GradedElement) -> Result<GradedElement> {
    crate::symplectic::poisson(&theta.element, f)
}

/// Number of random elements `q_square_check` tries per degree by default.
pub const DEFAULT_Q_SAMPLES: usize = 4;

/// Evaluates `Q(Q(z))` on every generator and on `samples` random elements
/// of each degree `0..=p+1`.
pub fn q_square_check(theta: &Hamiltonian, samples: usize, seed: u64, spec: &RandomSpec) -> Report {
    let chart = theta.chart.clone();
    let q2 = |f: &GradedElement| {
        let once = poisson_unchecked(&theta.element, f);
        poisson_unchecked(&theta.element, &once)
    };

    let gens = chart.generators();
    let gen_results: Vec<(Generator, GradedElement)> = gens
        .par_iter()
        .map(|&g| (g, q2(&GradedElement::generator(&chart, g).expect("chart generator"))))
        .collect();
    let mut on_gens = CheckOutcome::new("Q^2 on generators");
    for (i, (g, r)) in gen_results.iter().enumerate() {
        on_gens.record(i, r.is_zero(), || {
            let mut w = vec![format!("Q²({g})")];
            w.extend(r.witnesses(3));
            w
        });
    }

    let max_deg = chart.p + 1;
    let per_trial: Vec<(usize, u32, GradedElement, GradedElement)> = (0..samples * (max_deg as usize + 1))
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let deg = (t % (max_deg as usize + 1)) as u32;
            let f = random_homogeneous(&mut rng, &chart, deg, spec);
            let r = q2(&f);
            (t, deg, f, r)
        })
        .collect();
    let mut on_random = CheckOutcome::new("Q^2 on random elements");
    for (t, deg, f, r) in &per_trial {
        on_random.record(*t, r.is_zero(), || {
            let mut w = vec![format!("degree {deg} input {f}")];
            w.extend(r.witnesses(3));
            w
        });
    }
    Report::from_items("q-square", vec![on_gens, on_random], Some(seed), Some(per_trial.len()))
}

/// Closure conditions carried by the twist, as named forms that must vanish:
/// `dβ` for a Vinogradov twist, `dF₄` and `dF₇ + ½F₄∧F₄` for an M5 twist.
pub fn twist_closure(theta: &Hamiltonian) -> Vec<(String, DiffForm)> {
    match &theta.twist {
        Twist::None => Vec::new(),
        Twist::Beta(beta) => vec![("dβ".into(), ext_d(beta))],
        Twist::M5 { f4, f7 } => vec![("dF4".into(), ext_d(f4)), ("dF7 + 1/2 F4∧F4".into(), bianchi_f7(f4, f7))],
    }
}

/// `dF₇ + ½ F₄∧F₄`.
pub fn bianchi_f7(f4: &DiffForm, f7: &DiffForm) -> DiffForm {
    &ext_d(f7) + &wedge(f4, f4).scale(&ratio(1, 2))
}

/// True when every closure condition holds.
pub fn twist_is_closed(theta: &Hamiltonian) -> bool {
    twist_closure(theta).iter().all(|(_, w)| w.is_zero())
}

/// Potentials for a closed twist on `R^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistPotential {
    None,
    /// `β = dκ`.
    Beta(DiffForm),
    /// `F₄ = dC` and `F₇ + ½ C∧F₄ = dC̃`.
    M5 { c3: DiffForm, c6: DiffForm },
}

/// Primitive(s) of a closed twist; every closed twist on a chart of `R^d` is
/// gauge-trivial, the potentials below realise the gauge parameter.
pub fn twist_potential(theta: &Hamiltonian) -> Result<TwistPotential> {
    match &theta.twist {
        Twist::None => Ok(TwistPotential::None),
        Twist::Beta(beta) => Ok(TwistPotential::Beta(poincare_primitive(beta)?)),
        Twist::M5 { f4, f7 } => {
            let c3 = poincare_primitive(f4)?;
            if !bianchi_f7(f4, f7).is_zero() {
                return Err(Error::NotClosed);
            }
            let c6 = poincare_primitive(&(f7 + &wedge(&c3, f4).scale(&ratio(1, 2))))?;
            Ok(TwistPotential::M5 { c3, c6 })
        }
    }
}

/// Degree check used by callers that take homogeneous input.
pub(crate) fn expect_degree(f: &GradedElement, n: u32) -> Result<()> {
    match f.euler_degree() {
        _ if f.is_zero() => Ok(()),
        Degree::Homogeneous(k) if k == n => Ok(()),
        Degree::Homogeneous(k) => Err(Error::DegreeMismatch { expected: n, got: k.to_string() }),
        Degree::Inhomogeneous => Err(Error::DegreeMismatch { expected: n, got: "inhomogeneous".into() }),
    }
}
