//! Command implementations and their JSON reports.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rnm_core::axioms::{run_axiom_suites, Family};
use rnm_core::concatenation::{counterexample_check, ConcatResult};
use rnm_core::helly_solver::{self, check_condition_with, solve_with, sup_ratio_oracle, HellyInstance, HellyVerdict, DEFAULT_TOLERANCE};
use rnm_core::stratification::DEFAULT_RANK_TOLERANCE;
use rnm_core::{
    excluding_neighborhood, gauge as core_gauge, goldstine_witness, quasi_free_stratification, separate as core_separate, AtomSet,
    BidualTarget, Error, Field, L0Scalar, RNElement,
};
use serde_json::{json, Value};

use crate::instance::{Loaded, Scalar};
use crate::Failure;

pub struct Outcome {
    pub success: bool,
    pub summary: String,
    pub result: Value,
}

fn element(x: &RNElement, field: Field) -> Vec<Vec<Scalar>> {
    x.per_atom()
        .map(|v| v.iter().map(|c| Scalar::from_complex(*c, field)).collect())
        .collect()
}

fn scalar(x: &L0Scalar, field: Field) -> Vec<Scalar> {
    x.values().iter().map(|c| Scalar::from_complex(*c, field)).collect()
}

/// Real values; non-finite entries become `null`.
fn reals(x: &L0Scalar) -> Value {
    json!(x.values().iter().map(|c| c.re).collect::<Vec<_>>())
}

fn ids(set: &AtomSet) -> Vec<&str> {
    set.ids()
}

pub fn error_detail(e: &Error) -> Value {
    match e {
        Error::NotInUnitBidualBall { violations } => json!({ "violating_atoms": violations }),
        _ => Value::Null,
    }
}

fn helly_instance(l: &Loaded) -> Result<HellyInstance, Failure> {
    Ok(HellyInstance::new(l.functionals()?, l.targets()?, l.beta()?, l.epsilon()?)?)
}

fn verdict_json(l: &Loaded, inst: &HellyInstance, v: &HellyVerdict, tol: f64) -> Value {
    let field = l.field();
    let certificate = v.certificate.as_ref().map(|c| {
        json!({
            "lambdas": c.lambdas.iter().map(|x| scalar(x, field)).collect::<Vec<_>>(),
            "violation_set": ids(&c.violation_set),
            "violation_measure": c.violation_set.measure(),
            "verified": helly_solver::verify_certificate(inst, c),
        })
    });
    json!({
        "feasible": v.feasible,
        "solution": v.solution.as_ref().map(|x| element(x, field)),
        "within_budget": v.solution.as_ref().map(|_| v.within_budget(inst, tol)),
        "certificate": certificate,
        "min_solution_norm": reals(&v.min_solution_norm),
    })
}

fn verdict_summary(v: &HellyVerdict) -> String {
    match &v.certificate {
        None => "feasible".to_string(),
        Some(c) => format!("infeasible on {:?} (measure {})", c.violation_set.ids(), c.violation_set.measure()),
    }
}

pub fn check(l: &Loaded, tol: Option<f64>, samples: Option<usize>, seed: u64) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(DEFAULT_TOLERANCE);
    let inst = helly_instance(l)?;
    let v = check_condition_with(&inst, tol)?;
    let mut result = verdict_json(l, &inst, &v, tol);
    if let Some(samples) = samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let est = sup_ratio_oracle(inst.functionals(), inst.targets(), samples, &mut rng)?;
        result["oracle"] = json!({
            "samples": samples,
            "sup_ratio": reals(&est.values),
            "infinite": ids(&est.infinite),
        });
    }
    Ok(Outcome {
        success: v.feasible,
        summary: format!("check: {}", verdict_summary(&v)),
        result,
    })
}

pub fn solve(l: &Loaded, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(DEFAULT_TOLERANCE);
    let inst = helly_instance(l)?;
    let v = solve_with(&inst, tol)?;
    let mut result = verdict_json(l, &inst, &v, tol);
    if let Some(x) = &v.solution {
        result["relative_residual"] = json!(helly_solver::relative_residual(&inst, x)?);
    }
    Ok(Outcome {
        success: v.feasible,
        summary: format!("solve: {}", verdict_summary(&v)),
        result,
    })
}

pub fn separate(l: &Loaded) -> Result<Outcome, Failure> {
    let (g, m) = (l.body_g()?, l.body_m()?);
    let sep = core_separate(&g, &m)?;
    Ok(Outcome {
        success: true,
        summary: format!("separate: disjoint on {:?}", sep.set.ids()),
        result: json!({
            "riesz": element(sep.functional.riesz(), l.field()),
            "set": ids(&sep.set),
            "gap": reals(&sep.gap),
        }),
    })
}

pub fn stratify(l: &Loaded, tol: Option<f64>) -> Result<Outcome, Failure> {
    let fs = l.functionals()?;
    let strat = quasi_free_stratification(&fs, tol.unwrap_or(DEFAULT_RANK_TOLERANCE))?;
    let strata: Vec<Value> = strat
        .parts()
        .iter()
        .enumerate()
        .map(|(rank, part)| {
            let basis = strat
                .basis(rank)
                .map(|b| b.iter().map(|g| element(g.riesz(), l.field())).collect::<Vec<_>>())
                .unwrap_or_default();
            let groups: Vec<Value> = strat
                .groups(rank)
                .into_iter()
                .map(|(sel, set)| json!({ "selected": sel, "atoms": ids(&set) }))
                .collect();
            json!({ "rank": rank, "atoms": ids(part), "basis": basis, "selections": groups })
        })
        .collect();
    let summary = strat
        .parts()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_empty())
        .map(|(r, p)| format!("rank {r}: {:?}", p.ids()))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome {
        success: true,
        summary: format!("stratify: {summary}"),
        result: json!({ "strata": strata }),
    })
}

pub fn gauge(l: &Loaded) -> Result<Outcome, Failure> {
    let body = l.body_g()?;
    let x = l.point()?;
    let p = core_gauge(&body, &x)?;
    Ok(Outcome {
        success: true,
        summary: format!("gauge: {:?}", p.values().iter().map(|c| c.re).collect::<Vec<_>>()),
        result: json!({ "gauge": reals(&p) }),
    })
}

pub fn goldstine(l: &Loaded) -> Result<Outcome, Failure> {
    let fs = l.functionals()?;
    let targets = l.targets()?;
    let eps = l.epsilon()?;
    let bt = BidualTarget::new(fs.clone(), targets.clone())?;
    let x = goldstine_witness(&bt, &eps)?;
    let errors = fs
        .iter()
        .zip(&targets)
        .map(|(f, t)| Ok(reals(&f.evaluate(&x)?.sub(t)?.abs())))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Outcome {
        success: true,
        summary: "goldstine: witness found".to_string(),
        result: json!({
            "witness": element(&x, l.field()),
            "norm": reals(&x.norm()),
            "target_errors": errors,
        }),
    })
}

pub fn exclude(l: &Loaded) -> Result<Outcome, Failure> {
    let fs = l.functionals()?;
    let mut excluded = 0;
    let entries: Vec<Value> = fs
        .iter()
        .map(|g| match excluding_neighborhood(g) {
            Ok(ex) => {
                excluded += 1;
                json!({
                    "set": ids(&ex.set),
                    "delta": ex.delta,
                    "anchor": element(&ex.point, l.field()),
                    "eps": ex.nbhd.eps(),
                    "lam": ex.nbhd.lam(),
                })
            }
            Err(Error::InsideUnitBall) => json!({ "inside_unit_ball": true }),
            Err(e) => json!({ "error": e.to_string() }),
        })
        .collect();
    Ok(Outcome {
        success: excluded == fs.len(),
        summary: format!("exclude: {excluded} of {} functionals lie outside the unit ball", fs.len()),
        result: json!({ "functionals": entries }),
    })
}

pub fn counterexample(seed: u64, samples: usize) -> Result<Outcome, Failure> {
    let r = counterexample_check(seed, samples)?;
    if !r.passed() {
        return Err(Failure::Internal(Error::InvalidArgument(
            "counterexample facts did not verify".to_string(),
        )));
    }
    let concatenation = match &r.concatenation {
        ConcatResult::Element(x) => json!({ "in_module": true, "support": x.support() }),
        ConcatResult::NotInModule { first_indices, pattern } => {
            json!({ "in_module": false, "first_indices": first_indices, "pattern": pattern })
        }
    };
    Ok(Outcome {
        // the equations are infeasible in the module by construction
        success: false,
        summary: format!(
            "counterexample: condition holds {}/{}, solution impossible, {} truncations feasible",
            r.equality_holds,
            r.samples,
            r.truncations.len()
        ),
        result: json!({
            "condition": { "samples": r.samples, "equality_holds": r.equality_holds },
            "solution_impossible": {
                "support_sizes_checked": r.structural_checked,
                "residual_one_beyond_support": r.structural_holds,
                "concatenation": concatenation,
            },
            "truncations": r.truncations.iter().map(|t| json!({
                "n": t.n,
                "feasible": t.feasible,
                "max_deviation": t.max_deviation,
            })).collect::<Vec<_>>(),
        }),
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Norm => "norm",
        Family::InnerProduct => "inner_product",
        Family::Module => "module",
        Family::Algebra => "algebra",
    }
}

pub fn axioms(seed: u64, samples: usize) -> Outcome {
    let r = run_axiom_suites(seed, samples);
    let failing: Vec<&str> = r.laws.iter().filter(|l| !l.holds()).map(|l| l.name).collect();
    Outcome {
        success: failing.is_empty(),
        summary: if failing.is_empty() {
            format!("axioms: all {} laws hold", r.laws.len())
        } else {
            format!("axioms: failing laws {failing:?}")
        },
        result: json!({
            "laws": r.laws.iter().map(|l| json!({
                "name": l.name,
                "family": family_name(l.family),
                "samples": l.samples,
                "passed": l.passed,
            })).collect::<Vec<_>>(),
        }),
    }
}
