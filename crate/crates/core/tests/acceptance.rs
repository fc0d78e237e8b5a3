//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use infostore_core::degradability::{
    is_degradable_set, is_nondegradable_measurement, postprocess_measurement, preprocess_states,
};
use infostore_core::discrimination::{lambda_max, lambda_max_restricted, mu_max};
use infostore_core::game::{optimal_strategy, reward_at, sweep, StrategyClass};
use infostore_core::rays::extreme_indecomposable_effects;
use infostore_core::sample;
use infostore_core::spaces::{
    classical_simplex, from_catalog_name, pentagon_bloch, polygon, polygon_effects, polygon_radius,
    trine_fixture, verify_symmetric_decodable,
};
use infostore_core::storability::{
    characteristic_numbers, information_storability, is_n, uniform_center_certificate,
};
use infostore_core::{IsAlgorithm, Measurement, Settings, StateEnsemble, StateSpace, Tolerances};

use common::{degradable_by_merging, secant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    check((got - want).abs() <= tol, || {
        format!("{what}: got {got}, want {want} (tol {tol:e})")
    })
}

fn polygon_storability() -> Outcome {
    let settings = Settings::default();
    for n in 3..=12 {
        let want = if n % 2 == 0 {
            2.0
        } else {
            1.0 + secant(PI / n as f64)
        };
        let got =
            information_storability(&polygon(n).unwrap(), &settings).map_err(|e| e.to_string())?;
        close(got.value, want, 1e-7, &format!("IS(P{n})"))?;
    }
    Ok("P3..P12 match 2 / 1+sec(pi/n)".into())
}

fn classical() -> Outcome {
    let settings = Settings::default();
    for d in 1..=6 {
        let s = classical_simplex(d).unwrap();
        let got = information_storability(&s, &settings).map_err(|e| e.to_string())?;
        close(got.value, d as f64, 1e-9, &format!("IS(cl{d})"))?;
        let p = characteristic_numbers(&s, &settings).map_err(|e| e.to_string())?;
        check(p.m.is_none(), || format!("cl{d} reports m = {:?}", p.m))?;
        check(p.d == d, || format!("cl{d} reports d = {}", p.d))?;
    }
    Ok("cl1..cl6 have IS = d and no m".into())
}

fn s4_example() -> Outcome {
    let settings = Settings::default();
    let s = classical_simplex(4).unwrap();
    let states = vec![
        vec![0.5, 0.25, 0.25, 0.0],
        vec![0.25, 0.5, 0.0, 0.25],
        vec![0.25, 0.0, 0.5, 0.25],
        vec![0.0, 0.25, 0.25, 0.5],
    ];
    let x = StateEnsemble::from_states(&s, states, &settings.tol).map_err(|e| e.to_string())?;
    close(
        mu_max(&s, &x, &settings).unwrap().value,
        2.0,
        1e-9,
        "mu_max(X)",
    )?;
    for skip in 0..4 {
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        let v = mu_max(&s, &x.subset(&idx), &settings).unwrap().value;
        close(v, 1.75, 1e-9, &format!("mu_max without state {skip}"))?;
    }
    let verdict = is_degradable_set(&s, &x, &settings).map_err(|e| e.to_string())?;
    check(!verdict.degradable, || format!("verdict {verdict:?}"))?;
    Ok("mu_max = 2, every 3-subset 7/4, nondegradable".into())
}

fn certificates() -> Outcome {
    let settings = Settings::default();
    let mut cases: Vec<(StateSpace, f64, bool)> = Vec::new();
    for d in 1..=6 {
        cases.push((classical_simplex(d).unwrap(), 1.0 / d as f64, true));
    }
    for n in 3..=12 {
        let r = polygon_radius(n);
        let lambda0 = if n % 2 == 0 { 0.5 } else { 1.0 / (1.0 + r * r) };
        cases.push((polygon(n).unwrap(), lambda0, n % 2 == 1));
    }
    for (space, lambda0, cond_ii) in cases {
        let name = space.name().to_string();
        let cert = uniform_center_certificate(&space, &settings)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{name}: no certificate"))?;
        close(cert.lambda0, lambda0, 1e-7, &format!("{name} lambda0"))?;
        check(cert.condition_i, || format!("{name}: condition i false"))?;
        check(cert.condition_ii == cond_ii, || {
            format!("{name}: condition ii = {}", cert.condition_ii)
        })?;
        let is = information_storability(&space, &settings).unwrap().value;
        close(cert.predicted_is, is, 1e-7, &format!("{name} predicted IS"))?;
    }
    Ok("cl1..cl6 and P3..P12 certificates as predicted".into())
}

fn square_attainment() -> Outcome {
    let settings = Settings::default();
    let sq = polygon(4).unwrap();
    let e = polygon_effects(4).unwrap().indecomposable;
    let a = e[0].add(&e[1]).scaled(0.5);
    let b = e[2].add(&e[3]).scaled(0.5);
    let m = Measurement::new(&sq, vec![a.clone(), b.clone()], &settings.tol)
        .map_err(|e| e.to_string())?;
    close(lambda_max(&sq, &m).unwrap().value, 2.0, 1e-9, "lambda_max")?;
    let is = information_storability(&sq, &settings).unwrap().value;
    close(is, 2.0, 1e-9, "IS(P4)")?;
    let v = is_nondegradable_measurement(&sq, &m, &settings.tol).unwrap();
    check(v.nondegradable, || format!("faces overlap: {:?}", v.faces))?;
    let rays = extreme_indecomposable_effects(&sq, &settings).unwrap();
    for eff in [&a, &b] {
        let on_ray = rays.rays.iter().any(|r| {
            let scale = sq.sup(eff) / sq.sup(r);
            r.0.iter()
                .zip(&eff.0)
                .all(|(x, y)| (x * scale - y).abs() <= 1e-9)
        });
        check(!on_ray, || format!("{:?} lies on an extreme ray", eff.0))?;
    }
    Ok("lambda_max = 2 = IS, nondegradable, effects decomposable".into())
}

fn composites() -> Outcome {
    let settings = Settings::default();
    let mut notes = Vec::new();
    for name in ["ctensor:polygon:5,2", "dsum:polygon:5,polygon:7"] {
        let s = from_catalog_name(name).unwrap();
        let start = Instant::now();
        let p = characteristic_numbers(&s, &settings).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        check(p.d == 4 && p.n_star == 6, || {
            format!("{name}: d = {}, n_star = {}", p.d, p.n_star)
        })?;
        check(took <= Duration::from_secs(60), || {
            format!("{name} took {took:?}")
        })?;
        notes.push(format!("{name} {:.1}s", took.as_secs_f64()));
    }
    Ok(format!("d = 4, n_star = 6 ({})", notes.join(", ")))
}

fn figure_behaviour() -> Outcome {
    let settings = Settings::default();
    let t = from_catalog_name("ctensor:polygon:5,2").unwrap();
    let pt = characteristic_numbers(&t, &settings).unwrap();
    let table = sweep(&pt, t.name(), -3.0, 0.0, 300, &settings.tol).map_err(|e| e.to_string())?;
    for row in &table.rows {
        let ok = row.class == StrategyClass::Tie || row.optimal_n == 4 || row.optimal_n == 6;
        check(ok, || {
            format!("tensor sweep: w = {} picks n = {}", row.w, row.optimal_n)
        })?;
    }
    let s = from_catalog_name("dsum:polygon:5,polygon:7").unwrap();
    let ps = characteristic_numbers(&s, &settings).unwrap();
    let table = sweep(&ps, s.name(), -3.0, 0.0, 300, &settings.tol).map_err(|e| e.to_string())?;
    let fives = table.rows.iter().filter(|r| r.optimal_n == 5).count();
    check(fives > 0, || "direct-sum sweep never picks n = 5".into())?;
    Ok(format!(
        "tensor never strictly picks 5; direct sum picks 5 in {fives} rows"
    ))
}

fn advantage_threshold() -> Outcome {
    let settings = Settings::default();
    let p = characteristic_numbers(&polygon(5).unwrap(), &settings).unwrap();
    let t = infostore_core::game::advantage_threshold(&p, 3).ok_or("no threshold")?;
    close(t, -0.92705, 1e-4, "threshold")?;
    // Bisection on E_w(3) - 2 with IS_3 = 1 + sec(pi/5).
    let is3 = 1.0 + secant(PI / 5.0);
    let f = |w: f64| reward_at(is3, 3, w) - 2.0;
    let (mut lo, mut hi) = (-3.0, 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    close(t, 0.5 * (lo + hi), 1e-4, "threshold vs bisection")?;
    let above = optimal_strategy(&p, t + 0.01, &settings.tol).unwrap();
    let below = optimal_strategy(&p, t - 0.01, &settings.tol).unwrap();
    check(above.optimal_n == 3 && below.optimal_n == 2, || {
        format!(
            "strategies around threshold: {} / {}",
            above.optimal_n, below.optimal_n
        )
    })?;
    Ok(format!("threshold {t:.6}"))
}

fn qubit_fixtures() -> Outcome {
    let tol = Tolerances::default();
    let trine = trine_fixture(&tol);
    check(trine.povm_valid, || "trine POVM invalid".into())?;
    close(trine.povm_weight, 2.0 / 3.0, 1e-15, "trine weight")?;
    close(trine.success_sum, 2.0, 1e-12, "trine success sum")?;
    let pent = verify_symmetric_decodable(&pentagon_bloch(), &tol).map_err(|e| e.to_string())?;
    check(pent.balanced, || {
        format!("pentagon Bloch sum {:?}", pent.bloch_sum)
    })?;
    close(pent.r.unwrap_or(f64::NAN), 2.5, 1e-12, "pentagon r")?;
    close(
        pent.decodable_sum.unwrap_or(f64::NAN),
        2.0,
        1e-12,
        "pentagon decodable sum",
    )?;
    check(pent.povm_valid, || "pentagon POVM invalid".into())?;
    Ok("trine and pentagon fixtures".into())
}

const CASES: usize = 200;

fn property_spaces() -> Vec<StateSpace> {
    [
        "classical:2",
        "classical:3",
        "classical:4",
        "polygon:3",
        "polygon:4",
        "polygon:5",
        "polygon:6",
    ]
    .iter()
    .map(|n| from_catalog_name(n).unwrap())
    .collect()
}

fn property_suites() -> Outcome {
    let settings = Settings::default();
    let cmp = settings.tol.cmp;
    let spaces = property_spaces();
    let rays: Vec<_> = spaces
        .iter()
        .map(|s| extreme_indecomposable_effects(s, &settings).unwrap())
        .collect();
    let is: Vec<f64> = spaces
        .iter()
        .map(|s| information_storability(s, &settings).unwrap().value)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_2024);
    let mut violations: Vec<String> = Vec::new();
    let mut flag = |name: &str, case: usize, detail: String| {
        if violations.len() < 5 {
            violations.push(format!("{name} case {case}: {detail}"));
        } else if violations.len() == 5 {
            violations.push("...".into());
        }
    };
    let mut degradable_seen = [0usize; 2];

    for case in 0..CASES {
        let k = rng.gen_range(0..spaces.len());
        let (s, r) = (&spaces[k], &rays[k]);
        let nx = rng.gen_range(1..=4);
        let x = sample::ensemble(&mut rng, s, nx, &settings.tol).unwrap();
        let mu = mu_max(s, &x, &settings).unwrap();

        let ny = rng.gen_range(1..=4);
        let c = sample::stochastic_matrix(&mut rng, ny, nx);
        let y = preprocess_states(s, &x, &c).unwrap();
        let mu_y = mu_max(s, &y, &settings).unwrap().value;
        if mu_y > mu.value + cmp {
            flag("preprocessing", case, format!("{mu_y} > {}", mu.value));
        }

        let outcomes = rng.gen_range(1..=4);
        let a = sample::measurement(&mut rng, s, r, outcomes, &settings).unwrap();
        let lam = lambda_max_restricted(s, &a, &x).unwrap();
        let relabels = rng.gen_range(1..=4);
        let nu = sample::stochastic_matrix(&mut rng, a.len(), relabels);
        let b = postprocess_measurement(&a, &nu).unwrap();
        let lam_b = lambda_max_restricted(s, &b, &x).unwrap();
        if lam_b > lam + cmp {
            flag("postprocessing", case, format!("{lam_b} > {lam}"));
        }
        let lam_y = lambda_max_restricted(s, &a, &y).unwrap();
        if lam_y > lam + cmp {
            flag("mixture", case, format!("{lam_y} > {lam}"));
        }

        let attained = lambda_max_restricted(s, &mu.optimal_measurement, &x).unwrap();
        if (attained - mu.value).abs() > cmp || lam > mu.value + cmp {
            flag(
                "lemma",
                case,
                format!("mu {} vs optimal {attained}, random {lam}", mu.value),
            );
        }

        if mu.value > is[k] + cmp {
            flag(
                "storability bound",
                case,
                format!("{} > IS {}", mu.value, is[k]),
            );
        }

        let verdict = is_nondegradable_measurement(s, &a, &settings.tol).unwrap();
        let brute = degradable_by_merging(s, &a, cmp);
        if verdict.nondegradable == brute {
            flag(
                "merge search",
                case,
                format!("faces {:?}, brute degradable {brute}", verdict.faces),
            );
        }
        degradable_seen[brute as usize] += 1;
    }
    check(violations.is_empty(), || violations.join("; "))?;
    Ok(format!(
        "{CASES} cases x 6 properties, 0 violations (measurements: {} nondegradable, {} degradable)",
        degradable_seen[0], degradable_seen[1]
    ))
}

fn oracle_equivalence() -> Outcome {
    let base = Settings::default();
    let subset = Settings {
        is_algorithm: IsAlgorithm::EffectLp,
        ..Settings::default()
    };
    let mut names: Vec<String> = (1..=8).map(|d| format!("classical:{d}")).collect();
    names.extend((3..=12).map(|n| format!("polygon:{n}")));
    names.extend(
        [
            "dsum:classical:1,polygon:5",
            "dsum:classical:2,polygon:6",
            "dsum:polygon:3,polygon:5",
            "dsum:polygon:4,polygon:4",
            "dsum:polygon:5,polygon:7",
            "ctensor:classical:3,2",
            "ctensor:polygon:4,2",
            "ctensor:polygon:5,2",
            "ctensor:polygon:6,2",
        ]
        .map(String::from),
    );
    for name in &names {
        let s = from_catalog_name(name).unwrap();
        let ray = information_storability(&s, &base)
            .map_err(|e| e.to_string())?
            .value;
        let search = is_n(&s, s.num_vertices(), &subset)
            .map_err(|e| e.to_string())?
            .value;
        close(ray, search, 1e-7, name)?;
    }
    Ok(format!("{} catalog spaces agree", names.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("polygon storability", polygon_storability),
        ("classical storability", classical),
        ("four-state classical example", s4_example),
        ("uniform-centre certificates", certificates),
        ("square decomposable attainment", square_attainment),
        ("composite characteristic numbers", composites),
        ("sweep behaviour of composites", figure_behaviour),
        ("advantage threshold", advantage_threshold),
        ("qubit fixtures", qubit_fixtures),
        ("randomized property suites", property_suites),
        ("ray LP vs subset search", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(note) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
