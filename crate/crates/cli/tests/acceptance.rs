//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Every numeric check compares library output against closed forms written
//! out independently here, at the stated tolerance and within the stated
//! runtime budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steer_core::criteria::{
    eval_additive_sum_three_spin, eval_additive_sum_two, eval_bowen, eval_product_criterion, evaluate, AnyState,
    CriterionId, CriterionResult, InferencePlan,
};
use steer_core::families::{werner_state, FamilyId, StateFamily};
use steer_core::measurement::{
    assemblage_from_state, inferred_abs_mean, measure_joint, min_inference_variance, Measurement, MeasurementStrategy,
};
use steer_core::oracle::{
    certify_steering, functional_from_dual, lhs_feasible, qubit_mub, Feasibility, HiddenStateGrid, Phenomenon,
};
use steer_core::spin::spin_operators;
use steer_core::state::BipartiteState;
use steer_core::sweep::{bisect, boundary_bisect};
use steer_core::{random, Axis, Error, Spin};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{name}: got {got:.12}, want {want:.12} (tol {tol:e})"))
}

fn werner_family() -> StateFamily {
    StateFamily::new(FamilyId::Werner)
}

fn gaussian_family(nbar: f64) -> StateFamily {
    StateFamily::new(FamilyId::SymmetricGaussian).with("nbar", nbar).unwrap()
}

fn werner_thresholds() -> Check {
    let cases = [
        (CriterionId::ProductSpin, (5f64.sqrt() - 1.0) / 2.0),
        (CriterionId::SumThreeSpin, 1.0 / 3f64.sqrt()),
        (CriterionId::Linear2, 1.0 / 2f64.sqrt()),
        (CriterionId::Linear3, 1.0 / 3f64.sqrt()),
    ];
    let mut found = Vec::new();
    for (id, want) in cases {
        let r = boundary_bisect::<f64>(id, &werner_family(), "mu", (0.0, 1.0), 1e-9).map_err(|e| e.to_string())?;
        close(id.as_str(), r.threshold, want, 1e-8)?;
        found.push(format!("{id}={:.9}", r.threshold));
    }
    Ok(found.join(" "))
}

fn werner_intermediates() -> Check {
    let ops = spin_operators::<f64>(Spin::HALF);
    for mu in [0.3, 0.62, 0.8, 1.0] {
        let state = werner_state(mu).unwrap();
        let jz = Measurement::spin(&ops, Axis::Z);
        let joint = measure_joint(&state, &jz, &jz).map_err(|e| e.to_string())?;
        close(&format!("var_inf Jz at {mu}"), min_inference_variance(&joint), (1.0 - mu * mu) / 4.0, 1e-10)?;
        close(&format!("|<Jz>|inf at {mu}"), inferred_abs_mean(&joint), mu / 2.0, 1e-10)?;
        for axis in Axis::ALL {
            let m = Measurement::spin(&ops, axis);
            let corr = measure_joint(&state, &m, &m).map_err(|e| e.to_string())?.correlation();
            close(&format!("<J{0}J{0}> at {mu}", axis.label()), corr, -mu / 4.0, 1e-10)?;
        }
    }
    Ok("4 visibilities, 5 quantities each".into())
}

fn gaussian_boundaries() -> Check {
    let mut lines = Vec::new();
    for n in [0.5f64, 1.0, 2.0, 5.0, 10.0] {
        let ent_closed = n / (n * (1.0 + n)).sqrt();
        let reid_closed = ((1.0 + 2.0 * n) / (2.0 * (1.0 + n))).sqrt();
        let coll_closed = (1.0 + 4.0 * n) / (4.0 * (n * (1.0 + n)).sqrt());
        let flip = |id| {
            boundary_bisect::<f64>(id, &gaussian_family(n), "mu", (0.0, 1.0), 1e-10)
                .map(|r| r.threshold)
                .map_err(|e| format!("{id} at nbar {n}: {e}"))
        };
        let ent = flip(CriterionId::DuanSimon)?;
        let reid = flip(CriterionId::ReidCv)?;
        let coll = flip(CriterionId::CollectiveCvSum)?;
        close(&format!("entanglement at {n}"), ent, ent_closed, 1e-8)?;
        close(&format!("reid at {n}"), reid, reid_closed, 1e-8)?;
        close(&format!("collective at {n}"), coll, coll_closed, 1e-8)?;
        ensure(ent < reid && reid < coll, || format!("ordering fails at nbar {n}"))?;
        lines.push(format!("{n}:({ent:.6},{reid:.6},{coll:.6})"));
    }
    Ok(lines.join(" "))
}

fn uncertainty_relations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = f64::INFINITY;
    for spin in [Spin::HALF, Spin::ONE] {
        let ops = spin_operators::<f64>(spin);
        let j = spin.value::<f64>();
        for k in 0..1000 {
            let rho = if k % 2 == 0 {
                random::pure_state(spin.dim(), &mut rng)
            } else {
                random::density_matrix(spin.dim(), &mut rng)
            };
            let vx = rho.variance(&ops.jx).unwrap();
            let vy = rho.variance(&ops.jy).unwrap();
            let vz = rho.variance(&ops.jz).unwrap();
            let robertson = vx.sqrt() * vy.sqrt() - 0.5 * rho.expectation(&ops.jz).unwrap().abs();
            let sum = vx + vy + vz - j;
            ensure(robertson >= -1e-9, || format!("product relation slack {robertson} at j = {j}"))?;
            ensure(sum >= -1e-9, || format!("sum relation slack {sum} at j = {j}"))?;
            worst = worst.min(robertson).min(sum);
        }
    }
    Ok(format!("2000 states per relation, min slack {worst:.3e}"))
}

fn random_plan(rng: &mut ChaCha8Rng) -> InferencePlan<f64> {
    InferencePlan::spin_frames(Spin::HALF, random::rotation(rng), Spin::HALF, random::rotation(rng))
}

fn plan_criteria(state: &BipartiteState<f64>, plan: &InferencePlan<f64>) -> Result<Vec<CriterionResult<f64>>, Error> {
    Ok(vec![
        eval_product_criterion(state, plan)?,
        eval_bowen(state, plan)?,
        eval_additive_sum_two(state, plan)?,
        eval_additive_sum_three_spin(state, plan, Spin::HALF)?,
    ])
}

fn soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut evaluated = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let terms = rng.random_range(1..5);
        let state = random::separable_state::<f64>(2, 2, terms, &mut rng);
        let plan = random_plan(&mut rng);
        let any = AnyState::Finite(state.clone());
        let mut results = plan_criteria(&state, &plan).map_err(|e| e.to_string())?;
        for id in CriterionId::ALL {
            match evaluate(id, &any) {
                Ok(r) => results.push(r),
                Err(Error::Incompatible { .. }) => {}
                Err(e) => return Err(format!("{id}: {e}")),
            }
        }
        for r in results {
            evaluated += 1;
            worst = worst.max(r.margin);
            ensure(r.margin <= 1e-9, || format!("{} violated with margin {}", r.criterion_id, r.margin))?;
        }
    }
    Ok(format!("{evaluated} evaluations, max margin {worst:.3e}"))
}

fn implications() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut sum_hits, mut bowen_hits, mut product_hits) = (0, 0, 0);
    for k in 0..200 {
        let (state, plan) = if k % 2 == 0 {
            let state = BipartiteState::new(random::pure_state(4, &mut rng), 2, 2).unwrap();
            (state, random_plan(&mut rng))
        } else {
            // Werner states are U⊗U invariant, so a shared random frame probes them fully.
            let frame = random::rotation(&mut rng);
            let mu = rng.random_range(0.0..1.0);
            (werner_state(mu).unwrap(), InferencePlan::spin_frames(Spin::HALF, frame, Spin::HALF, frame))
        };
        let product = eval_product_criterion(&state, &plan).map_err(|e| e.to_string())?;
        let bowen = eval_bowen(&state, &plan).map_err(|e| e.to_string())?;
        let sum = eval_additive_sum_two(&state, &plan).map_err(|e| e.to_string())?;
        ensure(!sum.violated || product.violated, || format!("sample {k}: sum-two without product-spin"))?;
        ensure(!bowen.violated || product.violated, || format!("sample {k}: bowen without product-spin"))?;
        sum_hits += sum.violated as usize;
        bowen_hits += bowen.violated as usize;
        product_hits += product.violated as usize;
    }
    ensure(sum_hits > 0 && bowen_hits > 0, || "implications never exercised".into())?;
    Ok(format!("violations: sum-two {sum_hits}, bowen {bowen_hits}, product-spin {product_hits}"))
}

fn mub(n: usize) -> MeasurementStrategy<f64> {
    let ms = qubit_mub::<f64>(n).unwrap();
    MeasurementStrategy::matched(ms.clone(), ms).unwrap()
}

fn oracle_suite() -> Check {
    let e = |e: Error| e.to_string();
    let grid = HiddenStateGrid::<f64>::new(2, 200, 0).map_err(e)?;
    let phen = |mu: f64, n: usize| Phenomenon::from_state(&werner_state(mu).unwrap(), mub(n)).map_err(e);

    let low = phen(0.4, 3)?;
    let Feasibility::Feasible(w_low) = lhs_feasible(&low, &grid).map_err(e)? else {
        return Err("mu = 0.4 is not feasible".into());
    };
    let high = phen(0.9, 3)?;
    let Feasibility::GridInfeasible(dual) = lhs_feasible(&high, &grid).map_err(e)? else {
        return Err("mu = 0.9 is feasible on the grid".into());
    };
    let functional = functional_from_dual(&high, &grid, &dual).map_err(e)?;
    let cert = certify_steering(&high, &functional).map_err(e)?;
    ensure(cert.certified, || format!("mu = 0.9 not certified: {cert:?}"))?;
    let linear = steer_core::oracle::SteeringFunctional::correlation(&high, -1.0).map_err(e)?;
    let exact = certify_steering(&high, &linear).map_err(e)?;
    close("exact bound", exact.lhs_bound, 3f64.sqrt() / 4.0, 1e-9)?;
    ensure(exact.certified, || "correlation functional not certified at 0.9".into())?;

    let other = phen(0.2, 3)?;
    let Feasibility::Feasible(w_other) = lhs_feasible(&other, &grid).map_err(e)? else {
        return Err("mu = 0.2 is not feasible".into());
    };
    for p in [0.25, 0.5, 0.75] {
        let mixed = low.mix(p, &other).map_err(e)?;
        ensure(lhs_feasible(&mixed, &grid).map_err(e)?.is_feasible(), || format!("mixture {p} infeasible"))?;
        let residual = w_low.blend(p, &w_other).map_err(e)?.residual(&mixed, &grid).map_err(e)?;
        ensure(residual <= 1e-9, || format!("blended witness residual {residual} at {p}"))?;
    }

    let target = 1.0 / 2f64.sqrt();
    let mut flips = Vec::new();
    for points in [50, 200, 800] {
        let g = HiddenStateGrid::<f64>::new(2, points, 0).map_err(e)?;
        let b = bisect(0.3, 1.0, 1e-5, |mu| {
            let p = Phenomenon::from_state(&werner_state(mu)?, mub(2))?;
            Ok(!lhs_feasible(&p, &g)?.is_feasible())
        })
        .map_err(e)?;
        ensure(b.threshold <= target + 1e-5, || format!("grid {points} flips at {} above {target}", b.threshold))?;
        flips.push(b.threshold);
    }
    close("mub2 flip at 800 points", flips[2], target, 0.01)?;
    Ok(format!(
        "exact bound {:.10}, observed {:.4}; mub2 flips {:.5}/{:.5}/{:.5}",
        exact.lhs_bound, exact.observed_value, flips[0], flips[1], flips[2]
    ))
}

fn no_signalling() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let (da, db) = [(2, 2), (2, 3), (3, 2), (3, 3)][k % 4];
        let state = BipartiteState::new(random::density_matrix(da * db, &mut rng), da, db).unwrap();
        let ops = spin_operators::<f64>(Spin::from_dim(da).unwrap());
        let ms: Vec<Measurement<f64>> = (0..3)
            .map(|s| Measurement::from_observable(format!("A{s}"), &ops.along(random::rotation(&mut rng)[0])))
            .collect();
        let assemblage = assemblage_from_state(&state, &ms).map_err(|e| e.to_string())?;
        let marginals = assemblage.marginals();
        for m in &marginals[1..] {
            let d = m.max_abs_diff(&marginals[0]);
            worst = worst.max(d);
            ensure(d <= 1e-9, || format!("marginals differ by {d}"))?;
        }
    }
    Ok(format!("100 states, max marginal spread {worst:.3e}"))
}

fn cli_end_to_end() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_steer"))
            .args(["figure", "cv-bounds", "--nbar-grid", "0.1:10:50"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure(first.status.success(), || format!("exit status {:?}", first.status.code()))?;
    ensure(first.stdout == second.stdout, || "two runs differ".into())?;
    let mut reader = csv::Reader::from_reader(first.stdout.as_slice());
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    ensure(header[..4] == ["nbar", "entanglement", "reid", "collective"], || format!("header {header:?}"))?;
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let v: Vec<f64> = (0..4).map(|i| rec[i].parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        let n = v[0];
        close("entanglement", v[1], n / (n * (1.0 + n)).sqrt(), 1e-12)?;
        close("reid", v[2], ((1.0 + 2.0 * n) / (2.0 * (1.0 + n))).sqrt(), 1e-12)?;
        close("collective", v[3], (1.0 + 4.0 * n) / (4.0 * (n * (1.0 + n)).sqrt()), 1e-12)?;
        rows += 1;
    }
    ensure(rows == 50, || format!("{rows} rows"))?;
    Ok("50 rows re-parsed, byte-identical reruns".into())
}

fn main() {
    let suite: [(&str, Duration, fn() -> Check); 9] = [
        ("1 werner thresholds", Duration::from_secs(1), werner_thresholds),
        ("2 werner intermediates", Duration::from_secs(1), werner_intermediates),
        ("3 gaussian boundaries", Duration::from_secs(1), gaussian_boundaries),
        ("4 uncertainty relations", Duration::from_secs(5), uncertainty_relations),
        ("5 soundness", Duration::from_secs(10), soundness),
        ("6 implications", Duration::from_secs(10), implications),
        ("7 lhs oracle", Duration::from_secs(60), oracle_suite),
        ("8 no-signalling", Duration::from_secs(5), no_signalling),
        ("9 cli end-to-end", Duration::from_secs(5), cli_end_to_end),
    ];
    let mut failures = 0;
    for (name, budget, check) in suite {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                failures += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {reason}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
