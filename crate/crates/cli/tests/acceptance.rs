//! Acceptance checks. Prints one PASS/FAIL line per criterion and panics if any
//! outcome differs from the expected one (see `KNOWN_DEVIATIONS`).

use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use congr_core::exact::{cf_recognize, dirichlet_l_critical, format_factored, DirichletCharacter};
use congr_core::heckechar::{cm_form, ImagQuadField};
use congr_core::ikeda::{lift_coeff, lift_congruence_check, nonvanishing_sweep, LiftContext};
use congr_core::lseries::alg::default_den_digits;
use congr_core::lseries::{
    afe_eval, conv_spec, dirichlet_spec, fe_residual, partial_euler_product, sym2_spec, zeta_spec, AlgContext,
    Calibration, Complex, GammaShift, LFunctionSpec, RootNumber,
};
use congr_core::qexp::{newform_s26, QExpansion};

const RUNTIME_FAST_SECS: f64 = 1.0;
const RUNTIME_SYM2_SECS: f64 = 600.0;
const RUNTIME_CONV_SECS: f64 = 900.0;
const EULER_TOL: f64 = 1e-30;
const EULER_BOUND: u64 = 10_000;
const FE_TOL_EXP: i32 = -130;
const FE_POINTS: usize = 5;
const RECOGNITION_SAMPLES: usize = 1000;
const RECOGNITION_DIGITS: u32 = 150;
const RECOGNITION_DEN_DIGITS: u32 = 40;
const NONVANISHING_BOUND: u64 = 100;
const LIFT_PRIME_BOUND: u64 = 200;
const SEED: u64 = 20_260_926;

/// Criteria whose published reference values are not reproduced; the computed discrepancy is asserted instead.
const KNOWN_DEVIATIONS: [u32; 2] = [4, 5];

const ELLS: [u64; 8] = [31, 67, 137, 139, 523, 1609, 3463, 6761];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn fp(factors: &[(u64, u32)]) -> Integer {
    factors.iter().fold(Integer::from(1), |acc, &(p, e)| acc * Integer::from(p).pow(e))
}

fn q(sign: i32, num: &[(u64, u32)], den: &[(u64, u32)]) -> Rational {
    Rational::from((fp(num) * sign, fp(den)))
}

fn s26_oracle(n: usize) -> Vec<Integer> {
    // Delta E_14 with E_14 = 1 - 24 sum sigma_13(m) q^m, Delta from the product formula.
    let mut delta = vec![Integer::new(); n + 1];
    delta[1] = Integer::from(1);
    for m in 1..=n {
        for _ in 0..24 {
            for i in (m..=n).rev() {
                let t = delta[i - m].clone();
                delta[i] -= t;
            }
        }
    }
    let mut e14 = vec![Integer::new(); n + 1];
    e14[0] = Integer::from(1);
    for m in 1..=n {
        let mut sigma = Integer::new();
        for d in 1..=m {
            if m % d == 0 {
                sigma += Integer::from(d).pow(13);
            }
        }
        e14[m] = sigma * -24;
    }
    let mut out = vec![Integer::new(); n + 1];
    for i in 0..=n {
        for j in 0..=n - i {
            out[i + j] += Integer::from(&delta[i] * &e14[j]);
        }
    }
    out
}

/// (1/6) sum over alpha in Z[(1+sqrt(-3))/2] of norm n of alpha^6.
fn cm_oracle(n: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); n + 1];
    let r = (4.0 * n as f64).sqrt() as i64 + 2;
    for a in -r..=r {
        for b in -r..=r {
            if (a - b) % 2 != 0 {
                continue;
            }
            let norm4 = a * a + 3 * b * b;
            if norm4 == 0 || norm4 % 4 != 0 || norm4 / 4 > n as i64 {
                continue;
            }
            // (a + b sqrt(-3))^6 has real part sum_k C(6,2k) a^{6-2k} (-3 b^2)^k.
            let (a, b) = (Integer::from(a), Integer::from(b));
            let mut re = Integer::new();
            for (k, c) in [1u32, 15, 15, 1].iter().enumerate() {
                let k = k as u32;
                re += Integer::from(*c) * a.clone().pow(6 - 2 * k) * (Integer::from(-3) * b.clone().pow(2)).pow(k);
            }
            out[(norm4 / 4) as usize] += re;
        }
    }
    out.into_iter().map(|x| x / (6 * 64)).collect()
}

fn run_cli(args: &[&str]) -> (i32, String, f64) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_congr")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), t.elapsed().as_secs_f64())
}

fn criterion_1() -> Outcome {
    let published = ["1", "-48", "-195804", "-33552128", "-741989850", "9398592"];
    let (code, stdout, secs) = run_cli(&["qexp", "--form", "s26", "--terms", "6"]);
    let printed: Vec<String> = stdout
        .lines()
        .filter_map(|l| l.split_once(") = ").map(|(_, v)| v.split(" = ").next().unwrap().to_string()))
        .collect();
    let oracle: Vec<String> = s26_oracle(6)[1..].iter().map(|x| x.to_string()).collect();
    let pass = code == 0 && printed == published && oracle == published && secs < RUNTIME_FAST_SECS;
    Outcome {
        id: 1,
        name: "q-expansion regression",
        pass,
        detail: format!("{printed:?}, oracle agrees: {}, {secs:.3}s", oracle == published),
    }
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let g = cm_form(&ImagQuadField::new(-3).unwrap(), -6, 19).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let published: [(usize, i64); 9] =
        [(1, 1), (3, -27), (4, 64), (7, -286), (9, 729), (12, -1728), (13, 506), (16, 4096), (19, -10582)];
    let oracle = cm_oracle(19);
    let mut ok = true;
    for n in 1..=19 {
        let want = published.iter().find(|(m, _)| *m == n).map_or(0, |(_, v)| *v);
        ok &= g.coeffs[n] == want && oracle[n] == want;
    }
    Outcome {
        id: 2,
        name: "CM form regression",
        pass: ok && secs < RUNTIME_FAST_SECS,
        detail: format!("q^1..q^19 match the published list and a lattice oracle, {secs:.3}s"),
    }
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let chi = DirichletCharacter::kronecker(-3);
    let published = [(2u32, (4, 27), 0u64), (3, (4, 243), 3), (4, (8, 729), 0), (5, (4, 2187), 3)];
    let mut ok = true;
    let mut worst = 0f64;
    for (j, (n, d), surd) in published {
        let v = dirichlet_l_critical(j, &chi.pow(j)).unwrap();
        ok &= v.rational == Rational::from((n, d)) && v.sqrt_disc == surd && v.pi_exp == j as i32;
        // Oracle: sum chi^j(n) n^{-j}, with the integral tail for the principal character.
        let cutoff = 2_000_000u64;
        let mut sum = if j % 2 == 0 { 2.0 / 3.0 * (cutoff as f64).powi(1 - j as i32) / (j as f64 - 1.0) } else { 0.0 };
        for m in 1..cutoff {
            let c = chi.pow(j).eval(m as i64);
            if c != 0 {
                sum += c as f64 / (m as f64).powi(j as i32);
            }
        }
        let rel = (v.to_float(64).to_f64() - sum).abs() / sum;
        worst = worst.max(rel);
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= worst < 1e-9;
    Outcome {
        id: 3,
        name: "Dirichlet exact values",
        pass: ok && secs < RUNTIME_FAST_SECS + 1.0,
        detail: format!("4/27, 4sqrt3/243, 8/729, 4sqrt3/2187; numeric oracle rel. err {worst:.1e}"),
    }
}

fn published_sym2() -> Vec<Rational> {
    vec![
        q(1, &[(2, 37), (523, 1)], &[(3, 33), (5, 5), (7, 2), (11, 1), (13, 1), (23, 1)]),
        q(
            1,
            &[(2, 38), (5, 1), (7, 2), (11, 1), (13, 1), (23, 1), (31, 1), (137, 1)],
            &[(3, 38), (5, 6), (7, 4), (11, 2), (13, 2), (23, 2)],
        ),
        q(1, &[(2, 38), (67, 1), (139, 1), (1609, 1)], &[(3, 40), (5, 5), (7, 2), (11, 2), (13, 2), (23, 2)]),
        q(
            1,
            &[(2, 31), (5, 1), (11, 2), (19, 1), (3463, 1), (6761, 1)],
            &[(3, 44), (5, 6), (7, 3), (11, 2), (13, 2), (19, 1), (23, 2), (29, 1)],
        ),
    ]
}

fn published_conv() -> Vec<Rational> {
    vec![
        q(1, &[(7, 2), (13, 1), (17, 1), (19, 1), (107, 1)], &[(2, 5), (3, 4), (5, 18)]),
        q(1, &[(7, 1), (17, 1), (127, 1), (7607, 1)], &[(2, 3), (3, 6), (5, 18)]),
        q(1, &[(2, 1), (109, 1), (1428767, 1)], &[(3, 7), (5, 16), (7, 1), (23, 1)]),
        q(1, &[(2, 7), (13, 1), (853, 1)], &[(3, 10), (5, 12), (23, 1)]),
        q(1, &[(2, 9), (47, 1), (2069, 1)], &[(3, 12), (5, 12), (7, 1), (23, 1)]),
    ]
}

fn criterion_4(phi: &QExpansion) -> Outcome {
    let t = Instant::now();
    let published = published_sym2();
    let mut runs = Vec::new();
    for digits in [150, 200] {
        let mut ctx = AlgContext::new(phi, digits, Calibration::default()).unwrap();
        runs.push((2..=5).map(|j| ctx.lalg_sym2(j).unwrap().rational).collect::<Vec<_>>());
    }
    let secs = t.elapsed().as_secs_f64();
    let stable = runs[0] == runs[1];
    let ratios: Vec<Rational> = runs[0].iter().zip(&published).map(|(a, b)| Rational::from(a / b)).collect();
    let matches = ratios.iter().filter(|r| **r == 1).count();
    // Deviation: j = 5 differs from the printed value by exactly 2^10.
    assert!(stable, "Sym^2 values differ between 150 and 200 digits");
    assert_eq!(&ratios[..3], &[Rational::from(1), Rational::from(1), Rational::from(1)]);
    assert_eq!(ratios[3], Rational::from(1024), "computed j = 5 value: {}", format_factored(&runs[0][3]));
    assert!(secs < RUNTIME_SYM2_SECS);
    Outcome {
        id: 4,
        name: "Sym^2 table",
        pass: matches == 4 && stable,
        detail: format!(
            "{matches}/4 equal the printed values; j = 5 computed {} = 2^10 x printed; 150 = 200 digits: {stable}; {secs:.0}s",
            format_factored(&runs[0][3])
        ),
    }
}

fn criterion_5(phi: &QExpansion, g: &QExpansion) -> Outcome {
    let t = Instant::now();
    let published = published_conv();
    let mut runs = Vec::new();
    for digits in [150, 200] {
        let mut ctx = AlgContext::new(phi, digits, Calibration::default()).unwrap();
        let spec = ctx.conv_setup(g).unwrap();
        runs.push((7..=11).map(|j| ctx.lalg_conv(&spec, g, j).unwrap().rational).collect::<Vec<_>>());
    }
    let secs = t.elapsed().as_secs_f64();
    let stable = runs[0] == runs[1];
    let mut matches = 0;
    for (i, (a, b)) in runs[0].iter().zip(&published).enumerate() {
        let j = 7 + i as i64;
        let ratio = Rational::from(a / b);
        // Deviation: computed / printed = (-1)^j 20^{33 - 2j}.
        let expected = Rational::from(Integer::from(20).pow((33 - 2 * j) as u32) * if j % 2 == 0 { 1 } else { -1 });
        assert_eq!(ratio, expected, "j = {j}: computed {}", format_factored(a));
        matches += (ratio == 1) as usize;
    }
    assert!(stable, "convolution values differ between 150 and 200 digits");
    assert!(secs < RUNTIME_CONV_SECS);
    Outcome {
        id: 5,
        name: "convolution table",
        pass: matches == 5 && stable,
        detail: format!(
            "{matches}/5 equal the printed values; every j has computed/printed = (-1)^j 20^(33-2j) exactly; 150 = 200 digits: {stable}; {secs:.0}s"
        ),
    }
}

fn criterion_6() -> Outcome {
    let path = std::env::temp_dir().join(format!("congr-acceptance-{}.json", std::process::id()));
    let (code, _, secs) = run_cli(&["certify", "--preset", "sec9", "--json", path.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    let mut certified = Vec::new();
    let mut ok = code == 0;
    for r in report["reports"].as_array().unwrap() {
        if r["status"] == "Certified" {
            let ell = r["ell"].as_u64().unwrap();
            certified.push(ell);
            ok &= r["depth"] == 1;
            ok &= r["checks"].as_array().unwrap().iter().any(|c| {
                c["name"] == "val_ell(U) = 0" && c["passed"] == true && c["detail"] == format!("val_{ell}(U) = 0")
            });
        }
    }
    ok &= certified == ELLS;
    Outcome {
        id: 6,
        name: "certification",
        pass: ok,
        detail: format!("certified {certified:?}, all depth 1 with val(U) = 0, exit {code}, {secs:.0}s"),
    }
}

fn criterion_7(phi: &QExpansion, oracle: &[Integer]) -> Outcome {
    let ctx = LiftContext::new(5, 13, -3).unwrap();
    let mut checked = 0;
    let mut ok = true;
    for p in congr_core::exact::primes_up_to(LIFT_PRIME_BOUND as usize) {
        if p == 2 || p % 3 != 2 {
            continue;
        }
        match lift_coeff(&Integer::from(-(p as i64)), &ctx, phi) {
            Ok(c) => ok &= c == oracle[p as usize],
            Err(_) => ok = false,
        }
        checked += 1;
    }
    Outcome {
        id: 7,
        name: "lift identity at -p",
        pass: ok && checked == 23,
        detail: format!("{checked} primes p = 2 mod 3 up to {LIFT_PRIME_BOUND}, integral and equal to a(p)"),
    }
}

fn criterion_8(phi: &QExpansion, oracle: &[Integer]) -> Outcome {
    let mut ok = true;
    let mut witnesses = Vec::new();
    for ell in ELLS {
        let w = nonvanishing_sweep(phi, -3, ell, NONVANISHING_BOUND).unwrap();
        let independent = (3..=NONVANISHING_BOUND)
            .filter(|&p| p % 3 == 2 && congr_core::exact::arith::is_prime_u64(p))
            .find(|&p| !oracle[p as usize].is_divisible(&Integer::from(ell)));
        ok &= w.is_some() && w == independent;
        witnesses.push((ell, w));
    }
    Outcome {
        id: 8,
        name: "non-vanishing witnesses",
        pass: ok,
        detail: format!("{witnesses:?}, cross-checked by reduction"),
    }
}

fn random_points(spec: &LFunctionSpec, rng: &mut StdRng, prec: u32) -> Vec<Complex> {
    let center = (spec.motivic_weight as f64 + 1.0) / 2.0;
    (0..FE_POINTS)
        .map(|_| {
            let re = center + rng.gen_range(-3.0..3.0);
            let im = rng.gen_range(0.2..3.0);
            Complex::from_f64(prec, re, im)
        })
        .collect()
}

fn criterion_9(phi: &QExpansion, g: &QExpansion) -> Outcome {
    let t = Instant::now();
    let sign = |s: &mut LFunctionSpec, e: i32| s.root_number = RootNumber::sign(e);
    let mut specs = Vec::new();
    specs.push((zeta_spec(), 10));
    let mut s = dirichlet_spec(DirichletCharacter::kronecker(-3)).unwrap();
    sign(&mut s, 1);
    specs.push((s, 10));
    let mut s = sym2_spec(phi, DirichletCharacter::trivial(1), 2)
        .unwrap()
        .with_data(1, vec![GammaShift::c(0), GammaShift::r(-24)]);
    sign(&mut s, 1);
    specs.push((s, 40));
    let mut s = sym2_spec(phi, DirichletCharacter::kronecker(-3), 2)
        .unwrap()
        .with_data(27, vec![GammaShift::c(0), GammaShift::r(-25)]);
    sign(&mut s, 1);
    specs.push((s, 40));
    let mut s = conv_spec(phi, g, 2).unwrap().with_data(9, vec![GammaShift::c(0), GammaShift::c(-6)]);
    sign(&mut s, -1);
    specs.push((s, 30));

    let mut rng = StdRng::seed_from_u64(SEED);
    let prec = 600;
    let mut ok = true;
    let mut worst_euler = Float::with_val(64, 0);
    let mut worst_fe = Float::with_val(64, 0);
    for (spec, s_abs) in &specs {
        let s = Float::with_val(prec, *s_abs);
        let afe = afe_eval(spec, &Complex::real(s.clone()), 60).unwrap().value.re;
        let euler = partial_euler_product(&spec.coeffs, &s, EULER_BOUND).unwrap();
        let rel = Float::with_val(64, (afe - &euler) / euler).abs();
        ok &= rel < EULER_TOL;
        worst_euler = worst_euler.max(&rel);
        for pt in random_points(spec, &mut rng, prec) {
            let r = fe_residual(spec, &pt, 150).unwrap();
            ok &= r < Float::with_val(64, 10).pow(FE_TOL_EXP);
            worst_fe = worst_fe.max(&Float::with_val(64, &r));
        }
    }
    Outcome {
        id: 9,
        name: "oracle equivalence",
        pass: ok,
        detail: format!(
            "{} specs; worst |AFE/Euler - 1| = {:.1e}; worst FE residual = {:.1e}; {:.0}s",
            specs.len(),
            worst_euler.to_f64(),
            worst_fe.to_f64(),
            t.elapsed().as_secs_f64()
        ),
    }
}

fn criterion_10(phi: &QExpansion) -> Outcome {
    let ctx = LiftContext::new(5, 13, -3).unwrap();
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let (ell, r) = (31u64, 2u32);
    let modulus = Integer::from(ell).pow(r);
    let mut f2 = phi.clone();
    for c in f2.coeffs.iter_mut().skip(1) {
        *c += Rational::from(Integer::from(rng.gen_range(-1000i64..1000)) * &modulus);
    }
    let same = lift_congruence_check(phi, &f2, &ctx, ell, r, LIFT_PRIME_BOUND).unwrap();
    let mut f3 = phi.clone();
    f3.coeffs[5] += 1;
    let unit = lift_congruence_check(phi, &f3, &ctx, ell, 1, LIFT_PRIME_BOUND).unwrap();
    let pass = same.premise_holds
        && same.congruent()
        && !unit.premise_holds
        && unit.first_violation == Some(Integer::from(-5));
    Outcome {
        id: 10,
        name: "congruence inheritance",
        pass,
        detail: format!(
            "{} gammas congruent mod {ell}^{r}; unit perturbation at a(5) detected at gamma = {:?}",
            same.checked,
            unit.first_violation.map(|g| g.to_string())
        ),
    }
}

fn criterion_11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let prec = (RECOGNITION_DIGITS as f64 * std::f64::consts::LOG2_10) as u32 + 16;
    let den_bound = default_den_digits(RECOGNITION_DIGITS);
    let random_digits = |rng: &mut StdRng, n: u32| -> Integer {
        let mut x = Integer::new();
        for _ in 0..n {
            x = x * 10 + rng.gen_range(0u32..10);
        }
        x
    };
    let mut recovered = 0;
    for _ in 0..RECOGNITION_SAMPLES {
        let nd = rng.gen_range(1..=RECOGNITION_DEN_DIGITS);
        let den = random_digits(&mut rng, nd) + 1;
        let nn = rng.gen_range(1..=40);
        let num = random_digits(&mut rng, nn) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let r = Rational::from((num, den));
        let x = Float::with_val(prec, &r);
        if cf_recognize(&x, RECOGNITION_DIGITS, den_bound).unwrap() == Some(r) {
            recovered += 1;
        }
    }
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let e = Float::with_val(prec, 1).exp();
    let no_pi = cf_recognize(&pi, RECOGNITION_DIGITS, den_bound).unwrap().is_none();
    let no_e = cf_recognize(&e, RECOGNITION_DIGITS, den_bound).unwrap().is_none();
    Outcome {
        id: 11,
        name: "recognition soundness",
        pass: recovered == RECOGNITION_SAMPLES && no_pi && no_e,
        detail: format!("{recovered}/{RECOGNITION_SAMPLES} recovered; pi rejected: {no_pi}; e rejected: {no_e}"),
    }
}

fn main() {
    let phi = newform_s26(congr_core::qexp::DEFAULT_TRUNCATION).unwrap();
    let g = cm_form(&ImagQuadField::new(-3).unwrap(), -6, congr_core::qexp::DEFAULT_TRUNCATION).unwrap();
    let oracle = s26_oracle(LIFT_PRIME_BOUND as usize);
    let checks: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(criterion_3),
        Box::new(|| criterion_4(&phi)),
        Box::new(|| criterion_5(&phi, &g)),
        Box::new(criterion_6),
        Box::new(|| criterion_7(&phi, &oracle)),
        Box::new(|| criterion_8(&phi, &oracle)),
        Box::new(|| criterion_9(&phi, &g)),
        Box::new(|| criterion_10(&phi)),
        Box::new(criterion_11),
    ];
    let mut unexpected = Vec::new();
    for check in checks {
        let o = check();
        println!("{} {:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
        if o.pass == KNOWN_DEVIATIONS.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcome for criteria {unexpected:?}");
}
