//! Shared report builders behind the command-line and C interfaces.
//!
//! Each builder returns the `results` object together with a list of
//! consistency flags; an empty flag list means every cross-check passed.

use num::traits::Zero;
use serde_json::{json, Map, Value};

use crate::algebra::{rat_to_string, Mat, RatFunc};
use crate::artin::ArtinLocalRing;
use crate::connection::ConnectionModule;
use crate::deform::{
    first_order_basis, jet_lift, jet_local_trivialize, sharp_obstruction, DeformationJet,
    LocalTrivOutcome,
};
use crate::dgla::FiniteDGLA;
use crate::errors::{Error, Result};
use crate::problem::DeformProblem;
use crate::report::matq_value;
use crate::rigidity::LocalSystemTuple;

/// Parses a test-ring descriptor of the form `VARS:ORDER`, e.g. `e:3`
/// or `e,u:2`.
pub fn parse_ring_spec(spec: &str) -> Result<ArtinLocalRing> {
    let bad = || Error::OptionError(format!("--ring must be VARS:ORDER, got `{}`", spec));
    let (vars, order) = spec.split_once(':').ok_or_else(bad)?;
    let vars: Vec<String> = vars
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect();
    let order: u32 = order.trim().parse().map_err(|_| bad())?;
    if vars.is_empty() || order < 1 {
        return Err(bad());
    }
    Ok(ArtinLocalRing::truncated(vars, order))
}

/// Cohomology report: dimensions, conductors, classifier, parabolic classes,
/// and the duality pairing when the module is of endomorphism type.
pub fn cohomology_results(e: &ConnectionModule) -> Result<(Value, Vec<String>)> {
    let mut flags = Vec::new();
    let rep = e.dims_report()?;
    let mut results = Map::new();
    results.insert(
        "dims".into(),
        json!({
            "rank": rep.rank,
            "points": rep.points,
            "h0": rep.h0,
            "h1": rep.h1,
            "h1c": rep.h1c,
            "h1p": rep.h1p,
            "h2c": rep.h2c,
            "euler_open": rep.euler_open,
            "euler_compact": rep.euler_compact,
        }),
    );
    results.insert(
        "conductors".into(),
        Value::Array(
            rep.conductors
                .iter()
                .map(|(p, c)| json!({ "point": p, "conductor": c }))
                .collect(),
        ),
    );
    results.insert(
        "local_h0".into(),
        Value::Array(
            rep.local_h0
                .iter()
                .map(|(p, d)| json!({ "point": p, "dim": d }))
                .collect(),
        ),
    );

    // consistency: Euler characteristic and the six-term count
    let zcount = e.points.len() as i64;
    if rep.h0 as i64 - rep.h1 as i64 != (2 - zcount) * rep.rank as i64 {
        flags.push("euler-characteristic-mismatch".into());
    }
    let local_sum: usize = rep.local_h0.iter().map(|(_, d)| d).sum();
    if rep.h1c != rep.h1p + local_sum - rep.h0 {
        flags.push("six-term-count-mismatch".into());
    }

    // rank-2 classifier when applicable
    let classifier = if e.n == 2 {
        match e.rank2_rigidity_classifier() {
            Ok(v) => json!({
                "kinds": v.kinds.iter()
                    .map(|(p, k)| json!({ "point": p, "kind": k.label() }))
                    .collect::<Vec<_>>(),
                "nonscalar_points": v.m,
                "predicted_h1p": v.predicted_h1p,
                "rigid": v.rigid,
            }),
            Err(Error::NotIrreducible(d)) => {
                json!({ "inapplicable": format!("dim H0(End) = {}", d) })
            }
            Err(err) => return Err(err),
        }
    } else {
        Value::Null
    };
    results.insert("classifier".into(), classifier);

    // parabolic classes with certificates; pairing matrix on End-type modules
    let basis = e.h1p_basis()?;
    results.insert(
        "h1p_classes".into(),
        Value::Array(
            basis
                .iter()
                .map(|c| {
                    json!({
                        "coordinates": c.coeffs.iter().map(rat_to_string).collect::<Vec<_>>(),
                        "form": c.form.iter().map(|f| f.to_text()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    let k = (1..=e.n).find(|k| k * k == e.n);
    let pairing = if let (Some(_), true) = (k, !basis.is_empty()) {
        let p = e.pairing_matrix(&basis)?;
        if !p.add(&p.transpose()).is_zero() {
            flags.push("pairing-not-antisymmetric".into());
        }
        matq_value(&p)
    } else {
        Value::Null
    };
    results.insert("pairing_matrix".into(), pairing);
    Ok((Value::Object(results), flags))
}

/// Rigidity report for a monodromy tuple.
pub fn rigidity_results(t: &LocalSystemTuple) -> Result<(Value, Vec<String>)> {
    let rep = t.rigidity_report();
    let mut flags = Vec::new();
    if rep.product_identity && rep.absolutely_irreducible && rep.katz_index % 2 != 0 {
        flags.push("katz-index-parity-violated".into());
    }
    let results = json!({
        "n": rep.n,
        "centralizer_dims": rep.centralizer_dims,
        "centralizer_codims": rep.centralizer_codims,
        "katz_index": rep.katz_index,
        "product_identity": rep.product_identity,
        "absolutely_irreducible": rep.absolutely_irreducible,
        "rigid": rep.rigid,
    });
    Ok((results, flags))
}

fn ring_stage_matches(target: &ArtinLocalRing, current: &ArtinLocalRing) -> bool {
    target.vars == current.vars && target.basis == current.basis
}

fn monomial_text(vars: &[String], mono: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(mono) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            k => parts.push(format!("{}^{}", v, k)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn locally_trivializable(jet: &DeformationJet) -> Result<bool> {
    for z in &jet.base.points {
        if let LocalTrivOutcome::Obstructed { .. } = jet_local_trivialize(jet, z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mu_value(jet: &DeformationJet) -> Value {
    Value::Array(
        jet.mu
            .mats
            .iter()
            .map(|m: &Mat<RatFunc>| {
                Value::Array(
                    (0..m.rows)
                        .map(|i| {
                            Value::Array(
                                (0..m.cols)
                                    .map(|j| Value::String(m.at(i, j).to_text()))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Deformation report: first-order class count and the lift of the given jet
/// through the small-extension ladder up to the target order.
pub fn deform_results(p: &DeformProblem, order: u32, sharp: bool) -> Result<(Value, Vec<String>)> {
    let mut flags = Vec::new();
    if p.ring.order > order {
        return Err(Error::OptionError(format!(
            "problem ring has order {} but --order is {}",
            p.ring.order, order
        )));
    }
    let basis = first_order_basis(&p.base)?;
    let h1 = basis.len();

    let full = ArtinLocalRing::truncated(p.ring.vars.clone(), order);
    let chain = full.small_extension_chain();
    let mut current = p.jet.clone();
    let mut steps = Vec::new();
    let mut started = ring_stage_matches(&full, &current.ring);
    for step in chain.iter().rev() {
        if ring_stage_matches(&full, &current.ring) {
            // already at the requested order: nothing left to adjoin
            break;
        }
        if !started {
            if ring_stage_matches(&step.target, &current.ring) {
                started = true;
            } else {
                continue;
            }
        }
        let mut entry = Map::new();
        entry.insert(
            "adjoined_monomial".into(),
            Value::String(monomial_text(&step.source.vars, &step.kernel_monomial)),
        );
        if sharp {
            match sharp_obstruction(&current, step) {
                Ok(ob) => {
                    entry.insert(
                        "sharp".into(),
                        json!({
                            "pairing_with_one": rat_to_string(&ob.pairing_with_one),
                            "vanishes": ob.vanishes,
                        }),
                    );
                    if !ob.pairing_with_one.is_zero() {
                        flags.push("sharp-pairing-nonzero".into());
                    }
                    if let Some(lift) = ob.corrected_lift {
                        current = lift;
                        entry.insert("lifted".into(), Value::Bool(true));
                        steps.push(Value::Object(entry));
                        continue;
                    }
                }
                Err(Error::HypothesisViolated(msg)) => {
                    entry.insert("sharp".into(), json!({ "inapplicable": msg }));
                }
                Err(err) => return Err(err),
            }
        }
        current = jet_lift(&current, step)?;
        entry.insert("lifted".into(), Value::Bool(true));
        steps.push(Value::Object(entry));
    }
    if !started && !ring_stage_matches(&full, &current.ring) {
        return Err(Error::OptionError(
            "the problem ring is not a truncation stage of the requested order".into(),
        ));
    }

    let trivializable = locally_trivializable(&current)?;
    let results = json!({
        "first_order_classes": h1,
        "gauge_class_dimension": h1,
        "ring": { "vars": p.ring.vars, "order": p.ring.order, "dim": p.ring.dim() },
        "target_order": order,
        "lift_steps": steps,
        "final_mu": mu_value(&current),
        "final_locally_trivializable": trivializable,
    });
    Ok((results, flags))
}

/// DGLA report: validated structure constants and cohomology dimensions.
pub fn dgla_results(l: &FiniteDGLA, ring: &ArtinLocalRing) -> Result<(Value, Vec<String>)> {
    // the constructor has already verified d^2 = 0, antisymmetry, Leibniz, Jacobi
    let mut flags = Vec::new();
    let zero = l.zero_elem(ring, 1.min(l.max_degree()));
    if zero.deg == 1 && !l.is_mc(ring, &zero) {
        flags.push("zero-element-not-maurer-cartan".into());
    }
    let results = json!({
        "dims": l.dims,
        "cohomology_dims": l.cohomology_dims(),
        "laws_verified": true,
        "ring": { "vars": ring.vars, "order": ring.order, "dim": ring.dim() },
    });
    Ok((results, flags))
}
