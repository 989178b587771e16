//! Orders of finite classical groups over `F_q`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupFamily {
    GL,
    /// Unitary group `U_n(q)` inside `GL_n(q^2)`.
    U,
    /// `Sp_n(q)`, `n` even.
    Sp,
    /// `SO_n(q)`, `n` odd.
    SOOdd,
    /// `O_n(q)`, `n` even, either form type.
    OEvenAny,
    /// `SO_n(q)`, `n` even, either form type.
    SOEvenAny,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupOrder {
    Exact(BigInt),
    /// Minimum and maximum over the choice of form type.
    Range { min: BigInt, max: BigInt },
}

impl GroupOrder {
    pub fn min(&self) -> &BigInt {
        match self {
            GroupOrder::Exact(v) => v,
            GroupOrder::Range { min, .. } => min,
        }
    }

    pub fn max(&self) -> &BigInt {
        match self {
            GroupOrder::Exact(v) => v,
            GroupOrder::Range { max, .. } => max,
        }
    }
}

fn qpow(q: u64, e: u64) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

pub fn gl_order(n: u64, q: u64) -> BigInt {
    let mut r = qpow(q, n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        r *= qpow(q, i) - 1;
    }
    r
}

pub fn u_order(n: u64, q: u64) -> BigInt {
    let mut r = qpow(q, n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        r *= if i % 2 == 0 { qpow(q, i) - 1 } else { qpow(q, i) + 1 };
    }
    r
}

/// `q^(k^2) prod_{i=1}^k (q^(2i) - 1)`, shared by `Sp_2k` and `SO_{2k+1}`.
pub fn sp_order(k: u64, q: u64) -> BigInt {
    let mut r = qpow(q, k * k);
    for i in 1..=k {
        r *= qpow(q, 2 * i) - 1;
    }
    r
}

/// `|O^+_{2k}|` when `plus`, else `|O^-_{2k}|`.
pub fn o_even_order(k: u64, q: u64, plus: bool) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let mut r = BigInt::from(2) * qpow(q, k * (k - 1));
    r *= if plus { qpow(q, k) - 1 } else { qpow(q, k) + 1 };
    for i in 1..k {
        r *= qpow(q, 2 * i) - 1;
    }
    r
}

pub fn group_order(family: GroupFamily, n: u64, q: u64) -> Result<GroupOrder> {
    if q < 2 {
        return Err(Error::Input(format!("q = {q} is not a prime power")));
    }
    let parity = |even: bool| -> Result<u64> {
        if (n % 2 == 0) != even {
            Err(Error::Input(format!("{family:?} needs {} n, got {n}", if even { "even" } else { "odd" })))
        } else {
            Ok(n / 2)
        }
    };
    Ok(match family {
        GroupFamily::GL => GroupOrder::Exact(gl_order(n, q)),
        GroupFamily::U => GroupOrder::Exact(u_order(n, q)),
        GroupFamily::Sp => GroupOrder::Exact(sp_order(parity(true)?, q)),
        GroupFamily::SOOdd => GroupOrder::Exact(sp_order(parity(false)?, q)),
        GroupFamily::OEvenAny | GroupFamily::SOEvenAny => {
            let k = parity(true)?;
            let (mut lo, mut hi) = (o_even_order(k, q, true), o_even_order(k, q, false));
            if family == GroupFamily::SOEvenAny && k > 0 {
                lo /= 2;
                hi /= 2;
            }
            if lo == hi {
                GroupOrder::Exact(lo)
            } else {
                GroupOrder::Range { min: lo, max: hi }
            }
        }
    })
}
