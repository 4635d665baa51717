use super::{
    is_bound_exception, Analysis, BoundMethod, ContractedOrderWitness, Evidence, GroupBound, Reason, Scope,
    TestConfig, Witness,
};
use crate::arith;
use crate::multiplier::{contracted_candidates, contracted_two_applies, MultiplierWalk};
use crate::structure::ParamSet;

/// The multiplier group modulo `v` has more than `k` elements.
/// Rules out the cyclic group only.
pub fn multiplier_bound_test(params: &ParamSet, config: &TestConfig) -> arith::Result<Option<Witness>> {
    let an = Analysis::new(params, config)?;
    Ok(run_multiplier_bound(&an)?.ok())
}

/// The group of contracted multipliers modulo `v / h` has more than `k`
/// elements. Rules out the cyclic group only.
pub fn contracted_bound_test(params: &ParamSet, h: u128, config: &TestConfig) -> arith::Result<Option<Witness>> {
    let an = Analysis::new(params, config)?;
    Ok(contracted(&an, h)?.ok())
}

pub(super) fn run_multiplier_bound(an: &Analysis<'_>) -> arith::Result<Result<Witness, Reason>> {
    if is_bound_exception(&an.params) {
        return Ok(Err(Reason::Excepted));
    }
    if an.basis.is_empty() {
        return Ok(Err(Reason::NoMultipliers));
    }
    Ok(group_bound(an, &an.basis.primes, 1)?.map(|b| Witness {
        scope: Scope::Cyclic,
        evidence: Evidence::MultiplierBound(b),
    }))
}

/// Contracted test as used by the pipeline: only where the special rule
/// adds a candidate, since ordinary multipliers are already covered modulo `v`.
pub(super) fn run_contracted(an: &Analysis<'_>, h: u128) -> arith::Result<Result<Witness, Reason>> {
    if !contracted_two_applies(&an.params, h) {
        return Ok(Err(Reason::NotApplicable));
    }
    contracted(an, h)
}

fn contracted(an: &Analysis<'_>, h: u128) -> arith::Result<Result<Witness, Reason>> {
    let params = &an.params;
    if is_bound_exception(params) {
        return Ok(Err(Reason::Excepted));
    }
    if h == 0 || params.v() % h != 0 {
        return Ok(Err(Reason::NotApplicable));
    }
    let u = params.v() / h;
    let gens = contracted_candidates(params, &an.basis, h);
    if gens.is_empty() || u == 1 {
        return Ok(Err(Reason::NoMultipliers));
    }
    let ctx = an.order_context(u)?;
    for &t in &gens {
        let order = ctx.order(t)?;
        if order > params.k() {
            return Ok(Ok(Witness {
                scope: Scope::Cyclic,
                evidence: Evidence::ContractedOrder(ContractedOrderWitness { h, u, t, order }),
            }));
        }
    }
    Ok(group_bound(an, &gens, h)?.map(|b| Witness {
        scope: Scope::Cyclic,
        evidence: Evidence::ContractedBound(b),
    }))
}

fn group_bound(an: &Analysis<'_>, gens: &[u128], h: u128) -> arith::Result<Result<GroupBound, Reason>> {
    let k = an.k();
    let u = an.params.v() / h;
    let ctx = an.order_context(u)?;
    let mut l: u128 = 1;
    for &g in gens {
        let o = ctx.order(g)?;
        l = (l / arith::gcd(l, o)).saturating_mul(o);
    }
    if l > k {
        return Ok(Ok(GroupBound {
            h,
            modulus: u,
            generators: gens.to_vec(),
            lower_bound: l,
            method: BoundMethod::OrderLcm,
        }));
    }
    let cap = an.config.group_cap;
    let target = (k + 1).min(cap as u128) as usize;
    let mut walk = MultiplierWalk::new(gens, u);
    let found = walk.discover_up_to(target);
    if found as u128 > k {
        return Ok(Ok(GroupBound {
            h,
            modulus: u,
            generators: gens.to_vec(),
            lower_bound: k + 1,
            method: BoundMethod::Closure,
        }));
    }
    Ok(Err(if walk.is_closed() {
        Reason::Exhausted
    } else {
        Reason::Budget
    }))
}
