//! Genus-one B-model series in the mirror coordinate and its q-expansion
//! coefficients `N_1^d`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};
use crate::series::{invert_mirror, ipq_table, mirror_map_from, LogSeries, PowerSeriesQ};

/// `c_2 . H` for the (3,3) complete intersection (`c_2 = 6 H^2`, `H^3 = 9`).
pub const C2_DOT_H: i64 = 54;
pub const H_CUBED: i64 = 9;

/// `-(1/24) c_2 . H`.
pub fn n1_zero_from(c2_dot_h: i64) -> Q {
    -qi(c2_dot_h) / qi(24)
}

pub fn n1_zero() -> Q {
    n1_zero_from(C2_DOT_H)
}

/// The diagonal period series `I_{p,p}`, `p = 0..=4`, and `I_{0,0}, I_{0,1}`.
struct Tables {
    diag: Vec<PowerSeriesQ>,
    i0: Vec<LogSeries>,
}

fn tables(len: usize) -> Result<Tables> {
    let t = ipq_table(len)?;
    let diag = (0..5)
        .map(|p| {
            t[p][p]
                .as_pure()
                .ok_or_else(|| Error::LogCancellation(format!("I_{{{p},{p}}} is not pure")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tables {
        diag,
        i0: t[0].clone(),
    })
}

fn log_one_minus(c: i64, len: usize) -> Result<PowerSeriesQ> {
    PowerSeriesQ::from_ints(&[1, -c], len).log()
}

fn with_l(pure: PowerSeriesQ, l_coeff: Q) -> LogSeries {
    let len = pure.len();
    LogSeries::pure(pure).add(&LogSeries::l(len).scale(&l_coeff))
}

fn f1a_from(tb: &Tables, len: usize) -> Result<LogSeries> {
    let log0 = tb.diag[0].log()?;
    let log1 = tb.diag[1].log()?;
    let log2 = tb.diag[2].log()?;
    let inner = log0.scale(&qi(6)).add(&log1.scale(&qi(3))).add(&log2);
    let pure = log_one_minus(729, len)?
        .scale(&q(-7, 12))
        .sub(&log0.scale(&qi(6)))
        .sub(&inner.scale(&q(1, 2)));
    Ok(with_l(pure, n1_zero()))
}

/// `F_{1,A}` as a function of `z`:
/// `-(9/4)L - (7/12)log(1-3^6 z) - 6 log I_00 - (1/2)(6 log I_00 + 3 log I_11 + log I_22)`.
pub fn f1a_in_z(len: usize) -> Result<LogSeries> {
    f1a_from(&tables(len)?, len)
}

/// The same series after eliminating `I_{2,2}` through the product identity:
/// `-(9/4)L - (1/12)log(1-3^6 z) - 8 log I_00 - (1/2) log I_11`.
pub fn f1a_reduced(len: usize) -> Result<LogSeries> {
    let tb = tables(len)?;
    let pure = log_one_minus(729, len)?
        .scale(&q(-1, 12))
        .sub(&tb.diag[0].log()?.scale(&qi(8)))
        .sub(&tb.diag[1].log()?.scale(&q(1, 2)));
    Ok(with_l(pure, n1_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusOneSeries {
    #[serde(rename = "N1_0", with = "crate::rational::serde_q")]
    pub n1_0: Q,
    /// `N_1^d` for `d = 1..order-1`, keyed by `d`.
    #[serde(rename = "N1", with = "serde_q_map")]
    pub n1: BTreeMap<usize, Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub constant: Q,
    pub order: usize,
}

mod serde_q_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<usize, Q>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let as_str: BTreeMap<String, String> = m
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        as_str.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<usize, Q>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let k = k.parse::<usize>().map_err(serde::de::Error::custom)?;
                let v = crate::rational::parse(&v).map_err(serde::de::Error::custom)?;
                Ok((k, v))
            })
            .collect()
    }
}

/// `G(z) = F_{1,A} + (9/4) log Q`; the `L` terms must cancel exactly.
pub fn g_series(len: usize) -> Result<PowerSeriesQ> {
    let tb = tables(len)?;
    let f = f1a_from(&tb, len)?;
    let mm = mirror_map_from(&tb.i0)?;
    let g = f.add(&mm.log_q.scale(&-n1_zero()));
    g.as_pure()
        .ok_or_else(|| Error::LogCancellation(format!("L-degree {:?} survives in G", g.degree())))
}

/// Expands `g` in the coordinate `Q` given `z(Q)`; the constant is split off.
pub fn q_expansion(
    g: &PowerSeriesQ,
    z_of_q: &PowerSeriesQ,
    order: usize,
) -> Result<GenusOneSeries> {
    let gq = g.compose(z_of_q)?;
    let n1 = (1..gq.len()).map(|d| (d, gq.coeff(d))).collect();
    Ok(GenusOneSeries {
        n1_0: n1_zero(),
        n1,
        constant: gq.coeff(0),
        order,
    })
}

/// `N_1^d` for `1 <= d < len`.
pub fn n1_invariants(len: usize) -> Result<GenusOneSeries> {
    if len < 2 {
        return Err(Error::Config(
            "genus-one series needs order at least 2".into(),
        ));
    }
    let g = g_series(len)?;
    let tb = tables(len)?;
    let mm = mirror_map_from(&tb.i0)?;
    let z = invert_mirror(&mm.q_over_z)?;
    let out = q_expansion(&g, &z, len)?;
    debug_assert!(out.constant.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_zero_values() {
        assert_eq!(n1_zero(), q(-9, 4));
        assert_eq!(n1_zero_from(6 * H_CUBED), q(-9, 4));
        assert!(n1_zero_from(0).is_zero());
        assert!(n1_zero_from(1) < Q::zero());
        // chi/24 bookkeeping with chi = -144.
        assert_eq!(qi(-144) / qi(24), qi(-6));
    }

    #[test]
    fn f1a_shape() {
        let f = f1a_in_z(6).unwrap();
        assert_eq!(f.degree(), Some(1));
        assert_eq!(f.part(1).coeff(0), q(-9, 4));
        assert!(f.part(1).coeffs()[1..].iter().all(|c| c.is_zero()));
        assert!(f.part(0).coeff(0).is_zero());
    }

    #[test]
    fn both_routes_agree() {
        assert_eq!(f1a_in_z(9).unwrap(), f1a_reduced(9).unwrap());
    }

    #[test]
    fn identity_substitution_returns_g() {
        let g = g_series(6).unwrap();
        let ident = PowerSeriesQ::from_ints(&[0, 1], 6);
        let s = q_expansion(&g, &ident, 6).unwrap();
        for d in 1..6 {
            assert_eq!(s.n1[&d], g.coeff(d));
        }
    }

    #[test]
    fn stability() {
        let a = n1_invariants(6).unwrap();
        let b = n1_invariants(10).unwrap();
        for d in 1..=4 {
            assert_eq!(a.n1[&d], b.n1[&d]);
        }
        assert!(a.constant.is_zero());
    }

    #[test]
    fn json_shape() {
        let s = n1_invariants(4).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["N1_0"], "-9/4");
        assert_eq!(v["order"], 4);
        assert!(v["N1"]["1"].is_string());
        let back: GenusOneSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
