//! Plain-text rendering of verdicts and witnesses.

use std::fmt::Write;

use diffset::elimination::{BoundMethod, BrcWitness, CheckResult, Evidence, Scope, Witness};
use diffset::multiplier::Word;

fn word(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

fn scope(s: &Scope) -> String {
    match s {
        Scope::AllAbelian => "all abelian groups".into(),
        Scope::Exponent(e) => format!("exponent {e}"),
        Scope::Cyclic => "cyclic group".into(),
    }
}

pub fn witness(w: &Witness) -> String {
    let body = match &w.evidence {
        Evidence::Counting { lhs, rhs } => format!("counting: λ(v-1) = {lhs} but k(k-1) = {rhs}"),
        Evidence::Brc(BrcWitness::EvenNonSquare { n }) => format!("brc: v even and n = {n} is not a square"),
        Evidence::Brc(BrcWitness::LocalObstruction { q, a, b }) => {
            format!("brc: x² = {a}y² + {b}z² has no nontrivial solution at q = {q}")
        }
        Evidence::OrbitCount(o) => format!(
            "orbit-count: p = {}, |H| = {}, exp(H) = {}, m = {} ≡ {}, s = {}, o = {}",
            o.p,
            o.h_order,
            o.exponent_h,
            word(&o.word),
            o.m,
            o.s,
            o.o
        ),
        Evidence::DifferenceCollision(c) => {
            let t: Vec<String> = c.t.iter().map(|t| format!("{} ≡ {}", word(&t.word), t.value)).collect();
            format!(
                "difference-collision: t1 − t2 ≡ t3 − t4 (mod {}) with t = [{}], lcm = {}",
                c.exponent,
                t.join(", "),
                c.lcm
            )
        }
        Evidence::MultiplierBound(b) | Evidence::ContractedBound(b) => {
            let how = match b.method {
                BoundMethod::OrderLcm => "lcm of generator orders",
                BoundMethod::Closure => "closure",
            };
            format!(
                "{}: ⟨{:?}⟩ mod {} has at least {} elements ({how})",
                w.test(),
                b.generators,
                b.modulus,
                b.lower_bound
            )
        }
        Evidence::ContractedOrder(c) => {
            format!("contracted-order: ord_{}({}) = {} with h = {}", c.u, c.t, c.order, c.h)
        }
    };
    format!("[{}] {body}", scope(&w.scope))
}

pub fn result(r: &CheckResult) -> String {
    let mut out = String::new();
    write!(out, "{}: {}", r.params, r.status).unwrap();
    if let Some(c) = r.coverage {
        write!(out, " (coverage: {})", serde_json::to_value(c).unwrap().as_str().unwrap_or("?")).unwrap();
    }
    writeln!(out).unwrap();
    if r.tested != r.params {
        writeln!(out, "  tested as complement {}", r.tested).unwrap();
    }
    if let Some(c) = &r.construction {
        writeln!(out, "  known construction: {}", serde_json::to_string(&c.family).unwrap()).unwrap();
    }
    if let Some(reason) = &r.reason {
        writeln!(out, "  reason: {reason}").unwrap();
    }
    if let Some(w) = &r.global {
        writeln!(out, "  {}", witness(w)).unwrap();
    }
    for e in &r.per_exponent {
        match &e.witness {
            Some(w) => writeln!(out, "  exponent {}: {}", e.exponent, witness(w)).unwrap(),
            None => {
                let why: Vec<String> = e
                    .inconclusive
                    .iter()
                    .map(|i| format!("{} {}", i.test, serde_json::to_value(i.reason).unwrap().as_str().unwrap_or("?")))
                    .collect();
                writeln!(out, "  exponent {}: open ({})", e.exponent, why.join(", ")).unwrap();
            }
        }
    }
    out
}

pub fn elements(v: &serde_json::Value) -> String {
    let items: Vec<String> = v
        .as_array()
        .into_iter()
        .flatten()
        .map(|x| {
            let parts: Vec<String> = x.as_array().into_iter().flatten().map(|n| n.to_string()).collect();
            parts.join(",")
        })
        .collect();
    format!("{{{}}}", items.join("; "))
}
