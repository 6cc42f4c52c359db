//! Seeded verification suites for the algebroid axioms.

use rayon::prelude::*;

use super::{anchor_unchecked, anchor_vector, dorfman_unchecked, encode_section, rho_star};
use crate::algebra::{ratio, GradedElement, GradedMonomial, Poly};
use crate::cartan::{ext_d, DiffForm};
use crate::error::{Error, Result};
use crate::npq::Hamiltonian;
use crate::random::{random_form, random_poly, random_section, trial_rng, RandomSpec};
use crate::report::{CheckOutcome, Report};
use crate::symplectic::poisson_unchecked;

/// Identifiers of the Courant suite items, in report order.
pub const COURANT_AXIOMS: [&str; 7] = [
    "anchored Leibniz rule",
    "anchor is a bracket morphism",
    "metric invariance",
    "Leibniz identity",
    "symmetric part is exact",
    "rho o rho* = 0",
    "rho* is adjoint to rho",
];

fn scalar_part(f: &GradedElement) -> Poly {
    f.coefficient(&GradedMonomial::one(f.chart()))
}

fn poly_witness(diff: &Poly) -> Vec<String> {
    vec![format!("difference {diff}")]
}

fn element_witness(diff: &GradedElement) -> Vec<String> {
    diff.witnesses(3)
}

/// Runs one trial of every Courant axiom.
fn courant_trial(theta: &Hamiltonian, seed: u64, trial: usize, spec: &RandomSpec) -> Result<Vec<CheckOutcome>> {
    let chart = theta.chart();
    let d = chart.d;
    let mut rng = trial_rng(seed, trial);
    let a = encode_section(chart, &random_section(&mut rng, chart, spec))?;
    let b = encode_section(chart, &random_section(&mut rng, chart, spec))?;
    let c = encode_section(chart, &random_section(&mut rng, chart, spec))?;
    let f = random_poly(&mut rng, d, spec);
    let lam = random_form(&mut rng, d, 1, spec);
    let l = |x: &GradedElement, y: &GradedElement| dorfman_unchecked(theta, x, y);
    let eta = |x: &GradedElement, y: &GradedElement| scalar_part(&poisson_unchecked(x, y));
    let rho_f = |x: &GradedElement, g: &Poly| anchor_unchecked(theta, x, g);

    let mut out: Vec<CheckOutcome> = COURANT_AXIOMS.iter().map(|id| CheckOutcome::new(*id)).collect();

    // L_A(f B) = f L_A B + (ρ(A) f) B
    let lhs = l(&a, &b.mul_poly(&f));
    let rhs = &l(&a, &b).mul_poly(&f) + &b.mul_poly(&rho_f(&a, &f));
    let diff = &lhs - &rhs;
    out[0].record(trial, diff.is_zero(), || element_witness(&diff));

    // ρ(L_A B) = [ρ(A), ρ(B)]
    let lab = l(&a, &b);
    let lhs = anchor_vector(theta, &lab)?;
    let rhs = anchor_vector(theta, &a)?.lie_bracket(&anchor_vector(theta, &b)?);
    out[1].record(trial, lhs == rhs, || {
        (&lhs - &rhs).0.iter().enumerate().filter(|(_, p)| !p.is_zero()).take(3).map(|(mu, p)| format!("component {}: {p}", mu + 1)).collect()
    });

    // ρ(A)·η(B, C) = η(L_A B, C) + η(B, L_A C)
    let lhs = rho_f(&a, &eta(&b, &c));
    let rhs = &eta(&lab, &c) + &eta(&b, &l(&a, &c));
    let diff = &lhs - &rhs;
    out[2].record(trial, diff.is_zero(), || poly_witness(&diff));

    // L_A(L_B C) = L_{L_A B} C + L_B(L_A C)
    let diff = leibniz_defect(theta, &a, &b, &c);
    out[3].record(trial, diff.is_zero(), || element_witness(&diff));

    // L_A A = ½ ρ*(d η(A, A))
    let d_eta = ext_d(&DiffForm::scalar(eta(&a, &a)));
    let rhs = rho_star(chart, &d_eta.scale(&ratio(1, 2)))?;
    let diff = &l(&a, &a) - &rhs;
    out[4].record(trial, diff.is_zero(), || element_witness(&diff));

    // ρ(ρ*(λ)) f = 0
    let rs = rho_star(chart, &lam)?;
    let r = rho_f(&rs, &f);
    out[5].record(trial, r.is_zero(), || poly_witness(&r));

    // η(ρ*(λ), A) = ⟨λ, ρ(A)⟩
    let rho_a = anchor_vector(theta, &a)?;
    let contraction = lam
        .components()
        .fold(Poly::zero(d), |acc, (idx, q)| &acc + &(q * &rho_a.0[idx[0]]));
    let diff = &eta(&rs, &a) - &contraction;
    out[6].record(trial, diff.is_zero(), || poly_witness(&diff));

    Ok(out)
}

pub(crate) fn leibniz_defect(theta: &Hamiltonian, a: &GradedElement, b: &GradedElement, c: &GradedElement) -> GradedElement {
    let l = |x: &GradedElement, y: &GradedElement| dorfman_unchecked(theta, x, y);
    let lhs = l(a, &l(b, c));
    let rhs = &l(&l(a, b), c) + &l(b, &l(a, c));
    &lhs - &rhs
}

fn merge_trials(ids: &[&str], per_trial: Vec<Vec<CheckOutcome>>) -> Vec<CheckOutcome> {
    let mut acc: Vec<CheckOutcome> = ids.iter().map(|id| CheckOutcome::new(*id)).collect();
    for trial in per_trial {
        for (slot, item) in acc.iter_mut().zip(trial) {
            slot.merge(item);
        }
    }
    acc
}

/// All five Courant axioms plus `ρ∘ρ* = 0` and the defining adjointness of
/// `ρ*`, on random sections of a `p = 2` chart.
pub fn verify_courant(theta: &Hamiltonian, trials: usize, seed: u64, spec: &RandomSpec) -> Result<Report> {
    let chart = theta.chart();
    if chart.is_m5() || chart.p != 2 {
        return Err(Error::WrongChartKind("the Courant suite needs a p = 2 Vinogradov chart".into()));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| courant_trial(theta, seed, t, spec))
        .collect::<Result<Vec<_>>>()?;
    let items = merge_trials(&COURANT_AXIOMS, per_trial);
    Ok(Report::from_items("axioms courant", items, Some(seed), Some(trials)))
}

/// The Leibniz identity `L_A(L_B C) = L_{L_A B} C + L_B(L_A C)` on random
/// triples of sections; valid for every chart kind.
pub fn verify_leibniz(theta: &Hamiltonian, trials: usize, seed: u64, spec: &RandomSpec) -> Result<Report> {
    let chart = theta.chart();
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let a = encode_section(chart, &random_section(&mut rng, chart, spec))?;
            let b = encode_section(chart, &random_section(&mut rng, chart, spec))?;
            let c = encode_section(chart, &random_section(&mut rng, chart, spec))?;
            let diff = leibniz_defect(theta, &a, &b, &c);
            let mut item = CheckOutcome::new("Leibniz identity");
            item.record(t, diff.is_zero(), || element_witness(&diff));
            Ok(vec![item])
        })
        .collect::<Result<Vec<_>>>()?;
    let items = merge_trials(&["Leibniz identity"], per_trial);
    Ok(Report::from_items("axioms leibniz", items, Some(seed), Some(trials)))
}
