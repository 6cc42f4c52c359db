//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::path::PathBuf;
use std::process::{Command as Proc, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use gradsym::algebra::{gmul, make_chart, rat, ratio, ChartKind, ChartSpec, GradedElement, Poly};
use gradsym::algebroid::{anchor, decode_section, dorfman, encode_section, module_rank, rho_star, verify_courant, verify_leibniz};
use gradsym::cartan::{classical_dorfman, ext_d, homotopy, interior, lie_deriv, wedge, DiffForm};
use gradsym::genmetric::{act, b_shift, block_swap, build_gen_metric, extract, gl_embed, Background, Matrix};
use gradsym::npq::{
    bianchi_f7, embed_form, master_equation, q_apply, q_square_check, theta_m5, theta_vinogradov, twist_is_closed,
    Hamiltonian,
};
use gradsym::random::{random_form, random_homogeneous, random_poly, random_section, trial_rng, RandomSpec};
use gradsym::symplectic::{gauge_exp, poisson, symmetry_factor, DEFAULT_GAUGE_ITERATIONS};
use gradsym::algebra::Generator;
use num_rational::BigRational;
use rand::Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn vin(d: usize, p: u32) -> Arc<ChartSpec> {
    make_chart(ChartKind::Vinogradov { d, p }).unwrap()
}

fn m5(d: usize) -> Arc<ChartSpec> {
    make_chart(ChartKind::M5 { d }).unwrap()
}

fn deg(f: &GradedElement) -> u32 {
    f.euler_degree().value().unwrap()
}

fn sign(e: i64) -> BigRational {
    if e.rem_euclid(2) == 1 { rat(-1) } else { rat(1) }
}

fn c1_pairing_table() -> Verdict {
    let mut checked = 0;
    for chart in [vin(3, 2), vin(4, 3), m5(6)] {
        let one = GradedElement::scalar(&chart, Poly::one(chart.d));
        // odd p flips the (χ, ψ) entry
        let chi_psi = if chart.p % 2 == 0 { rat(1) } else { rat(-1) };
        for a in chart.generators() {
            for b in chart.generators() {
                let ga = GradedElement::generator(&chart, a).unwrap();
                let gb = GradedElement::generator(&chart, b).unwrap();
                let got = poisson(&ga, &gb).unwrap();
                let expected = match (a, b) {
                    (Generator::X(i), Generator::P(j)) if i == j => one.clone(),
                    (Generator::P(i), Generator::X(j)) if i == j => -&one,
                    (Generator::Psi(i), Generator::Chi(j)) if i == j => one.clone(),
                    (Generator::Chi(i), Generator::Psi(j)) if i == j => one.scale(&chi_psi),
                    (Generator::Zeta, Generator::Zeta) => one.clone(),
                    _ => GradedElement::zero(&chart),
                };
                ensure(got == expected, || format!("({a}, {b}) = {got} on {:?}", chart.kind))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generator pairs; (χ,ψ) = -δ at odd p"))
}

fn c2_poisson_suite() -> Verdict {
    let spec = RandomSpec::default();
    for (ci, chart) in [vin(3, 2), vin(3, 3), m5(6)].into_iter().enumerate() {
        let p = i64::from(chart.p);
        for t in 0..200 {
            let mut rng = trial_rng(200 + ci as u64, t);
            let mut pick = |max: u32| {
                let n = rng.gen_range(0..=max);
                random_homogeneous(&mut rng, &chart, n, &spec)
            };
            let (f, g, h) = (pick(chart.p + 1), pick(chart.p + 1), pick(chart.p + 1));
            let (df, dg) = (i64::from(deg(&f)), i64::from(deg(&g)));
            let fg = poisson(&f, &g).unwrap();
            ensure(fg == poisson(&g, &f).unwrap().scale(&symmetry_factor(chart.p, deg(&f), deg(&g))), || {
                format!("graded symmetry, trial {t} on {:?}", chart.kind)
            })?;
            let leib = &gmul(&fg, &h).unwrap() + &gmul(&g, &poisson(&f, &h).unwrap()).unwrap().scale(&sign((df - p) * dg));
            ensure(poisson(&f, &gmul(&g, &h).unwrap()).unwrap() == leib, || format!("Leibniz, trial {t} on {:?}", chart.kind))?;
            let jac = &poisson(&fg, &h).unwrap()
                + &poisson(&g, &poisson(&f, &h).unwrap()).unwrap().scale(&sign((df - p) * (dg - p)));
            ensure(poisson(&f, &poisson(&g, &h).unwrap()).unwrap() == jac, || format!("Jacobi, trial {t} on {:?}", chart.kind))?;
        }
    }
    Ok("symmetry, Leibniz, Jacobi: 3 charts × 200 triples".into())
}

fn closed_or_not<R: Rng>(rng: &mut R, d: usize, p: u32, closed: bool, spec: &RandomSpec) -> DiffForm {
    if closed {
        ext_d(&random_form(rng, d, p as usize, spec))
    } else {
        random_form(rng, d, p as usize + 1, spec)
    }
}

fn m5_pair<R: Rng>(rng: &mut R, closed: bool) -> (DiffForm, DiffForm) {
    let spec = RandomSpec { max_degree: 1, coeff_bound: 2, max_terms: 2 };
    if closed {
        let c3 = random_form(rng, 8, 3, &spec);
        let f4 = ext_d(&c3);
        let f7 = &wedge(&c3, &f4).scale(&ratio(-1, 2)) + &ext_d(&random_form(rng, 8, 6, &spec));
        (f4, f7)
    } else {
        (random_form(rng, 8, 4, &spec), random_form(rng, 8, 7, &spec))
    }
}

fn c3_boxed_equivalence() -> Verdict {
    let spec = RandomSpec::default();
    let (mut zero, mut nonzero) = (0, 0);
    for family in 0..3 {
        for t in 0..20 {
            let mut rng = trial_rng(300 + family, t);
            let closed = t % 2 == 0;
            let theta = match family {
                0 | 1 => {
                    let p = 2 + family as u32;
                    let d = if closed { rng.gen_range(p as usize + 1..=4) } else { p as usize + 2 };
                    theta_vinogradov(&vin(d, p), &closed_or_not(&mut rng, d, p, closed, &spec)).unwrap()
                }
                _ => {
                    let (f4, f7) = m5_pair(&mut rng, closed);
                    theta_m5(&m5(8), &f4, &f7).unwrap()
                }
            };
            let me = master_equation(&theta).1;
            let qs = q_square_check(&theta, 1, t as u64, &spec).passed();
            ensure(me == qs, || format!("family {family} trial {t}: master {me}, Q² {qs}"))?;
            if me { zero += 1 } else { nonzero += 1 }
        }
    }
    Ok(format!("60 hamiltonians, {zero} with (Θ,Θ)=0 and {nonzero} without"))
}

fn c4_vinogradov_classification() -> Verdict {
    let spec = RandomSpec::default();
    let check = |d: usize, p: u32, beta: &DiffForm, t: usize| -> Result<bool, String> {
        let ok = master_equation(&theta_vinogradov(&vin(d, p), beta).unwrap()).1;
        let is_closed = ext_d(beta).is_zero();
        ensure(ok == is_closed, || format!("trial {t}: master {ok}, dβ = 0 {is_closed}"))?;
        Ok(is_closed)
    };
    let (mut n_closed, mut n_open) = (0, 0);
    for t in 0..50 {
        let mut rng = trial_rng(400, t);
        let p = 2 + (t % 2) as u32;
        let closed = t % 4 < 2;
        let d = if closed { rng.gen_range(p as usize + 1..=4) } else { 4 };
        let beta = closed_or_not(&mut rng, d, p, closed, &spec);
        if check(d, p, &beta, t)? { n_closed += 1 } else { n_open += 1 }
    }
    ensure(n_closed > 0 && n_open > 0, || "only one direction exercised".into())?;
    let mut p3_open = 0;
    for t in 0..10 {
        let mut rng = trial_rng(401, t);
        let beta = closed_or_not(&mut rng, 5, 3, false, &spec);
        if !check(5, 3, &beta, t)? {
            p3_open += 1;
        }
    }
    Ok(format!("50 β: {n_closed} closed, {n_open} not closed; plus 10 p=3, d=5 β with {p3_open} not closed"))
}

fn c5_m5_bianchi() -> Verdict {
    let chart = m5(8);
    let one = Poly::one(8);
    let x1 = Poly::var(8, 0).unwrap();
    let f4 = &DiffForm::term(8, &[0, 1, 2, 3], one.clone()).unwrap() + &DiffForm::term(8, &[4, 5, 6, 7], one).unwrap();
    let top = [1, 2, 3, 4, 5, 6, 7];
    let stated = DiffForm::term(8, &top, x1.scale(&ratio(-1, 2))).unwrap();
    let corrected = DiffForm::term(8, &top, -&x1).unwrap();
    let check = |f4: &DiffForm, f7: &DiffForm| -> Result<bool, String> {
        let th = theta_m5(&chart, f4, f7).unwrap();
        let me = master_equation(&th).1;
        ensure(me == twist_is_closed(&th), || format!("master {me} disagrees with the form identity"))?;
        Ok(me)
    };
    let stated_ok = check(&f4, &stated)?;
    let residual = bianchi_f7(&f4, &stated);
    ensure(check(&f4, &corrected)?, || "F7 = -x1 dx2345678 should satisfy the identity".into())?;
    ensure(!check(&f4, &DiffForm::zero(8, 7))?, || "F7 = 0 should violate the identity".into())?;
    let (mut pass, mut fail) = (0, 0);
    for t in 0..20 {
        let mut rng = trial_rng(500, t);
        let (a, b) = m5_pair(&mut rng, t % 2 == 0);
        if check(&a, &b)? { pass += 1 } else { fail += 1 }
    }
    ensure(pass > 0 && fail > 0, || "only one direction exercised".into())?;
    Ok(format!(
        "20 random pairs ({pass} closed, {fail} not); F7=0 fails; F7=-x1·dx2345678 passes; \
         F7=-1/2·x1·dx2345678 gives dF7+1/2F4∧F4 = {residual} so both engines report {}",
        if stated_ok { "PASS" } else { "FAIL" }
    ))
}

fn c6_derived_is_classical() -> Verdict {
    let spec = RandomSpec::default();
    let mut quadratic = 0;
    let charts: Vec<(Arc<ChartSpec>, usize)> = vec![
        (vin(2, 2), 67), (vin(3, 2), 67), (vin(4, 2), 66),
        (vin(2, 3), 67), (vin(3, 3), 67), (vin(4, 3), 66),
        (m5(6), 200),
    ];
    for (ci, (chart, n)) in charts.iter().enumerate() {
        let theta = Hamiltonian::untwisted(chart);
        for t in 0..*n {
            let mut rng = trial_rng(600 + ci as u64, t);
            let mut a = random_section(&mut rng, chart, &spec);
            let b = random_section(&mut rng, chart, &spec);
            if t % 10 == 0 {
                a.v = gradsym::cartan::VectorField::zero(chart.d);
            }
            let classical = classical_dorfman(&a, &b).unwrap();
            let derived = dorfman(&theta, &encode_section(chart, &a).unwrap(), &encode_section(chart, &b).unwrap()).unwrap();
            ensure(derived == encode_section(chart, &classical).unwrap(), || format!("trial {t} on {:?}", chart.kind))?;
            ensure(decode_section(chart, &derived).unwrap() == classical, || format!("decode, trial {t}"))?;
            if a.v.is_zero() && classical.sigma.as_ref().is_some_and(|s| !s.is_zero()) {
                quadratic += 1;
            }
        }
    }
    ensure(quadratic > 0, || "no pair exercised -λ'∧dλ".into())?;
    Ok(format!("200 pairs each for p=2, p=3, m5; {quadratic} pairs with nonzero -λ'∧dλ"))
}

fn c7_courant_suite() -> Verdict {
    let spec = RandomSpec::default();
    let chart = vin(3, 2);
    let mut rng = trial_rng(700, 0);
    let closed = closed_or_not(&mut rng, 3, 2, true, &spec);
    for (label, beta) in [("untwisted", DiffForm::zero(3, 3)), ("closed β", closed)] {
        let r = verify_courant(&theta_vinogradov(&chart, &beta).unwrap(), 100, 7, &spec).unwrap();
        ensure(r.passed(), || format!("{label}: {}", r.to_string().replace('\n', " | ")))?;
    }
    let chart4 = vin(4, 2);
    let open = DiffForm::term(4, &[0, 1, 2], Poly::var(4, 3).unwrap()).unwrap();
    let r = verify_leibniz(&theta_vinogradov(&chart4, &open).unwrap(), 100, 7, &spec).unwrap();
    ensure(!r.passed() && !r.witnesses.is_empty(), || "non-closed twist passed the Leibniz identity".into())?;
    let theta = Hamiltonian::untwisted(&chart);
    for t in 0..100 {
        let mut rng = trial_rng(701, t);
        let lam = random_form(&mut rng, 3, 1, &spec);
        let f = random_poly(&mut rng, 3, &spec);
        ensure(anchor(&theta, &rho_star(&chart, &lam).unwrap(), &f).unwrap().is_zero(), || format!("ρ∘ρ*, trial {t}"))?;
    }
    Ok(format!("7 items × 100 trials on two hamiltonians; negative control fails with witness {}", r.witnesses[0]))
}

fn c8_ranks() -> Verdict {
    for d in 1..=6 {
        let r = module_rank(&vin(d, 2), 1).unwrap();
        ensure(r == 2 * d, || format!("vinogradov({d},2): {r}"))?;
    }
    let r10 = module_rank(&vin(4, 3), 2).unwrap();
    let r27 = module_rank(&m5(6), 5).unwrap();
    ensure(r10 == 10, || format!("vinogradov(4,3) n=2: {r10}"))?;
    ensure(r27 == 27, || format!("m5(6) n=5: {r27}"))?;
    Ok("2d for d=1..6, 10, 27".into())
}

fn c9_gauge_covariance() -> Verdict {
    let spec = RandomSpec::default();
    for t in 0..40 {
        let mut rng = trial_rng(900, t);
        let p = 2 + (t % 2) as u32;
        let chart = vin(4, p);
        let beta = random_form(&mut rng, 4, p as usize + 1, &spec);
        let rho = random_form(&mut rng, 4, p as usize, &spec);
        let r = embed_form(&chart, &rho).unwrap();
        let e = |f: &GradedElement| gauge_exp(&r, f, DEFAULT_GAUGE_ITERATIONS).unwrap();
        let theta = theta_vinogradov(&chart, &beta).unwrap();
        let moved = theta_vinogradov(&chart, &(&beta + &ext_d(&rho))).unwrap();
        ensure(e(theta.element()) == *moved.element(), || format!("Θ covariance, trial {t}"))?;
        if t < 20 {
            let a = encode_section(&chart, &random_section(&mut rng, &chart, &spec)).unwrap();
            let b = encode_section(&chart, &random_section(&mut rng, &chart, &spec)).unwrap();
            let lhs = e(&dorfman(&theta, &a, &b).unwrap());
            let rhs = dorfman(&moved, &e(&a), &e(&b)).unwrap();
            ensure(lhs == rhs, || format!("bracket conjugation, trial {t}"))?;
        }
    }
    Ok("40 forms ρ (20 per p), 20 section pairs".into())
}

fn c10_cartan() -> Verdict {
    let spec = RandomSpec::default();
    for t in 0..200 {
        let mut rng = trial_rng(1000, t);
        let d = rng.gen_range(1..=8);
        let r = rng.gen_range(0..=d.min(7));
        let w = random_form(&mut rng, d, r, &spec);
        ensure(ext_d(&ext_d(&w)).is_zero(), || format!("d² = 0, trial {t}"))?;

        let d = rng.gen_range(1..=4);
        let r = rng.gen_range(0..=d);
        let v = gradsym::random::random_vector_field(&mut rng, d, &spec);
        let w = random_form(&mut rng, d, r, &spec);
        let mut magic = interior(&v, &ext_d(&w));
        if r > 0 {
            magic = &magic + &ext_d(&interior(&v, &w));
        }
        ensure(lie_deriv(&v, &w) == magic, || format!("Cartan formula, trial {t}"))?;

        let r = rng.gen_range(1..=d);
        let w = random_form(&mut rng, d, r, &spec);
        let dk = &ext_d(&homotopy(&w).unwrap()) + &homotopy(&ext_d(&w)).unwrap();
        ensure(dk == w, || format!("dK + Kd = id, trial {t}"))?;

        let (r, s) = (rng.gen_range(0..=d), rng.gen_range(0..=d));
        let a = random_form(&mut rng, d, r, &spec);
        let b = random_form(&mut rng, d, s, &spec);
        let ba = wedge(&b, &a);
        ensure(wedge(&a, &b) == if r * s % 2 == 1 { -&ba } else { ba }, || format!("wedge sign, trial {t}"))?;

        let p = rng.gen_range(2..=4);
        let chart = vin(d, p);
        let r = rng.gen_range(0..=d);
        let w = random_form(&mut rng, d, r, &spec);
        let q = q_apply(&Hamiltonian::untwisted(&chart), &embed_form(&chart, &w).unwrap()).unwrap();
        ensure(q == -embed_form(&chart, &ext_d(&w)).unwrap(), || format!("Q vs d, trial {t}"))?;
    }
    Ok("5 identities × 200 trials; Q = -d under the ψ embedding".into())
}

fn entry<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=5).into())
}

fn random_background<R: Rng>(rng: &mut R, d: usize) -> Background {
    let mut a = Matrix::zeros(d, d);
    let mut b = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            a.set(i, j, entry(rng));
            if i < j {
                let x = entry(rng);
                b.set(i, j, x.clone());
                b.set(j, i, -x);
            }
        }
    }
    Background::new(&(&a.transpose() * &a) + &Matrix::identity(d), b).unwrap()
}

fn c11_genmetric() -> Verdict {
    for t in 0..100 {
        let mut rng = trial_rng(1100, t);
        let d = rng.gen_range(1..=4);
        let bg = random_background(&mut rng, d);
        let h = build_gen_metric(&bg).map_err(|e| e.to_string())?;
        ensure(h.invariants_hold(), || format!("invariants, trial {t}"))?;
        ensure(extract(&h).map_err(|e| e.to_string())? == bg, || format!("roundtrip, trial {t}"))?;
        let o = match t % 3 {
            0 => b_shift(random_background(&mut rng, d).b()).unwrap(),
            1 => gl_embed(random_background(&mut rng, d).g()).unwrap(),
            _ => block_swap(d),
        };
        ensure(act(&o, &h).map_err(|e| e.to_string())?.invariants_hold(), || format!("action, trial {t}"))?;
    }
    let h = build_gen_metric(&Background::new(Matrix::from_i64(&[&[2]]), Matrix::zeros(1, 1)).unwrap()).unwrap();
    let swapped = act(&block_swap(1), &h).unwrap();
    let half = Background::new(Matrix::from_rows(vec![vec![ratio(1, 2)]]).unwrap(), Matrix::zeros(1, 1)).unwrap();
    ensure(swapped == build_gen_metric(&half).unwrap(), || "block swap of g = (2)".into())?;
    Ok("100 backgrounds; block swap g=(2) → H(1/2, 0)".into())
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn c12_cli_contract() -> Verdict {
    let cases = [
        ("closed_beta.json", vec!["check-master", "--json"], "closed_beta.check-master.json", 0),
        ("open_beta.json", vec!["axioms", "--suite", "leibniz", "--json"], "open_beta.leibniz.json", 1),
        ("bad_rank.json", vec!["check-master", "--json"], "bad_rank.check-master.json", 2),
    ];
    for (cfg, args, golden, code) in &cases {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "4"] {
            let out = Proc::new(env!("CARGO_BIN_EXE_gradsym"))
                .arg("--config")
                .arg(data(cfg))
                .args(args)
                .env("RAYON_NUM_THREADS", threads)
                .env_remove("GB_SEED")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(*code), || format!("{cfg}: exit {:?}, expected {code}", out.status.code()))?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{cfg}: reports differ between runs"))?;
        let expected = std::fs::read(data(golden)).map_err(|e| e.to_string())?;
        ensure(outputs[0] == expected, || format!("{cfg}: report differs from {golden}"))?;
    }
    Ok("exit codes 0/1/2, byte-identical across runs and thread counts".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("pairing table conformance", c1_pairing_table),
        ("Poisson algebra suite", c2_poisson_suite),
        ("Q² = 0 ⟺ (Θ,Θ) = 0", c3_boxed_equivalence),
        ("Vinogradov classification", c4_vinogradov_classification),
        ("M5 Bianchi equivalence", c5_m5_bianchi),
        ("derived bracket = classical bracket", c6_derived_is_classical),
        ("Courant axiom suite", c7_courant_suite),
        ("module ranks", c8_ranks),
        ("gauge covariance", c9_gauge_covariance),
        ("Cartan self-checks", c10_cartan),
        ("generalised metric", c11_genmetric),
        ("CLI determinism and exit codes", c12_cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
