//! Hall-Petresco words: the sequence tau_1, tau_2, ... determined by
//!
//! `x_1^w x_2^w ... x_n^w = tau_1(x)^w tau_2(x)^C(w,2) ... tau_w(x)`
//!
//! for every w >= 1, computed in a nilpotent collector context. tau_w lies
//! in the w-th term of the lower central series, so its lower-central
//! weight is at least min(w, c + 1).

use num_bigint::BigInt;

use crate::collect::{GroupElement, NilpotentContext};
use crate::error::Result;
use crate::scalar::binomial_int;

#[derive(Clone, Debug)]
pub struct PetrescoResult {
    pub inputs: Vec<GroupElement>,
    /// tau_1 .. tau_W.
    pub taus: Vec<GroupElement>,
}

/// Computes tau_1..tau_W for the given elements by the defining recurrence.
/// `w_max` may exceed the class; the extra words are then the identity.
pub fn petresco(
    ctx: &NilpotentContext,
    xs: &[GroupElement],
    w_max: u32,
) -> Result<PetrescoResult> {
    assert!(w_max >= 1);
    let mut taus: Vec<GroupElement> = Vec::with_capacity(w_max as usize);

    let mut tau1 = ctx.identity();
    for x in xs {
        tau1 = ctx.mul(&tau1, x)?;
    }
    taus.push(tau1);

    for w in 2..=w_max {
        // rhs = x_1^w ... x_n^w
        let mut rhs = ctx.identity();
        let wi = BigInt::from(w);
        for x in xs {
            rhs = ctx.mul(&rhs, &ctx.pow(x, &wi)?)?;
        }
        // prefix = tau_1^C(w,1) ... tau_{w-1}^C(w,w-1)
        let mut prefix = ctx.identity();
        for (k, tau) in taus.iter().enumerate() {
            let exp = binomial_int(&wi, (k + 1) as u32);
            prefix = ctx.mul(&prefix, &ctx.pow(tau, &exp)?)?;
        }
        taus.push(ctx.mul(&ctx.inv(&prefix)?, &rhs)?);
    }

    Ok(PetrescoResult { inputs: xs.to_vec(), taus })
}

/// Checks that lcs_weight(tau_w) >= min(w, c + 1) for every computed tau.
pub fn verify_tau_weight(ctx: &NilpotentContext, result: &PetrescoResult) -> Result<bool> {
    for (i, tau) in result.taus.iter().enumerate() {
        let w = (i + 1) as u32;
        if ctx.lcs_weight(tau)? < w.min(ctx.class() + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
