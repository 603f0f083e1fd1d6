//! Exponent bookkeeping at the degenerate fibers and the final comparison of
//! the divisor of `|φ|` on the `ψ`-line.

use std::collections::BTreeMap;
use std::time::Instant;

use log::info;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;
use crate::euler_holo::{
    exact_chart_agreement, holo_report, pi_divisors, HoloReport, SmoothFanData,
};
use crate::euler_top::{total_chi_y0, StratumOptions};
use crate::gw::{f1a_in_z, f1a_reduced, g_series, n1_invariants, n1_zero};
use crate::lattice_fan::{build_fan_pi, build_fan_sigma, check_refines};
use crate::rational::{q, qi, Q};
use crate::series::{ipq_table, mirror_map, pf_apply, yukawa_from_pf, PFOperator, PowerSeriesQ};

/// Euler characteristic of a smooth fiber (cited input).
pub const CHI_SMOOTH: i64 = 144;
/// `χ(O_{W_1}) = χ(O_{W_2}) = 1`: both components are rational threefolds (cited input).
pub const CHI_W1: i64 = 1;
pub const CHI_W2: i64 = 1;
/// Expected values of the computed inputs.
pub const EXPECTED_CHI_Y0: i64 = 192;
pub const EXPECTED_KAPPA_ZERO: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    /// `ψ = ∞`, maximally unipotent monodromy.
    Mum,
    /// `ψ^6 = 1`, ordinary double points; one record for all six.
    Odp,
    /// `ψ = 0`.
    KPoint,
}

impl PointKind {
    pub fn multiplicity(self) -> usize {
        match self {
            PointKind::Odp => 6,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub kind: PointKind,
    #[serde(with = "crate::rational::serde_q")]
    pub kappa: Q,
    /// Vanishing orders of `η_0 .. η_3` in the Deligne extension.
    #[serde(with = "crate::rational::serde_q_vec")]
    pub orders: Vec<Q>,
    pub kappa_provenance: String,
    pub orders_provenance: String,
}

/// ODP orders used for the headline check, and the alternative sign reading.
pub fn odp_orders() -> Vec<Q> {
    [0, 0, -1, -1].map(qi).to_vec()
}

pub fn odp_orders_alternative() -> Vec<Q> {
    [0, 0, 1, 1].map(qi).to_vec()
}

pub fn kpoint_orders() -> Vec<Q> {
    [2, 2, 4, 4].map(qi).to_vec()
}

pub fn kappa_odp() -> Q {
    q(1, 6)
}

pub fn odp_point() -> SpecialPoint {
    SpecialPoint {
        kind: PointKind::Odp,
        kappa: kappa_odp(),
        orders: odp_orders(),
        kappa_provenance: "cited: ordinary double point degeneration of a Calabi-Yau threefold"
            .into(),
        orders_provenance: "declared: (0,0,-1,-1), the reading that reproduces the final identity"
            .into(),
    }
}

pub fn kpoint(kappa: Q) -> SpecialPoint {
    SpecialPoint {
        kind: PointKind::KPoint,
        kappa,
        orders: kpoint_orders(),
        kappa_provenance: "computed from the Euler characteristics of the central fiber".into(),
        orders_provenance: "declared: (2,2,4,4)".into(),
    }
}

/// `κ = -(1/6)(χ_sm - χ_0) - Σ χ(O_{W_i})`.
pub fn kappa_from_geometry(chi_sm: i64, chi_0: i64, holo_chis: &[i64]) -> Q {
    -qi(chi_sm - chi_0) / qi(6) - qi(holo_chis.iter().sum())
}

/// Coefficient of `log|t|^2` in `log|φ|`:
/// `κ - (χ_sm/12) ord_0 - Σ_p (3-p) ord_p`.
pub fn phi_order(point: &SpecialPoint, chi_sm: i64) -> Q {
    let mut n = point.kappa.clone() - qi(chi_sm) / qi(12) * &point.orders[0];
    for (p, o) in point.orders.iter().enumerate().take(4) {
        n -= qi(3 - p as i64) * o;
    }
    n
}

/// Exponents of `‖η_0‖, ‖η_1‖, ‖η_2‖` in the factorization of the torsion
/// invariant: `(χ_sm/6 + 6, 4, 2)`.
pub fn eta_exponents(chi_sm: i64) -> [Q; 3] {
    [qi(chi_sm) / qi(6) + qi(6), qi(4), qi(2)]
}

/// Orders of `|φ|` (not `|φ|^2`) at `0`, each sixth root of unity, and `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiDivisor {
    #[serde(with = "crate::rational::serde_q")]
    pub at_zero: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub at_mu6: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub at_infinity: Q,
}

impl PhiDivisor {
    pub fn degree(&self) -> Q {
        &self.at_zero + qi(6) * &self.at_mu6 + &self.at_infinity
    }

    /// Fixes the order at `∞` so the total degree vanishes.
    pub fn balanced(at_zero: Q, at_mu6: Q) -> Self {
        let at_infinity = -(&at_zero + qi(6) * &at_mu6);
        PhiDivisor {
            at_zero,
            at_mu6,
            at_infinity,
        }
    }
}

pub fn assemble_phi(kpoint: &SpecialPoint, odp: &SpecialPoint, chi_sm: i64) -> PhiDivisor {
    PhiDivisor::balanced(
        qi(2) * phi_order(kpoint, chi_sm),
        qi(2) * phi_order(odp, chi_sm),
    )
}

/// The divisor of `|ψ^{-6·9/4} (1 - ψ^{-6})^{7/12}|^4` written with
/// `1 - ψ^{-6} = ψ^{-6}(ψ^6 - 1)`.
pub fn target_phi() -> PhiDivisor {
    let power = qi(4);
    let from_q = power.clone() * q(9, 4) * qi(-6);
    let from_disc = power.clone() * q(7, 12) * qi(-6);
    let on_psi = from_q + from_disc;
    // ψ^6 - 1 has six simple roots.
    let on_root = power * q(7, 12);
    PhiDivisor::balanced(on_psi, on_root)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub passed: bool,
}

impl Check {
    pub fn eq<T: PartialEq + ToString>(name: &str, expected: T, got: T) -> Self {
        Check {
            name: name.into(),
            passed: expected == got,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub fn holds(name: &str, passed: bool) -> Self {
        Check {
            name: name.into(),
            expected: "true".into(),
            got: passed.to_string(),
            passed,
        }
    }
}

/// Identities of the period series at order `len`.
pub fn series_checks(len: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let op = PFOperator::three_three();
    let table = ipq_table(len)?;
    let annihilated = table[0].iter().take(4).all(|s| pf_apply(&op, s).is_zero());
    out.push(Check::holds(
        "PF annihilates I_{0,q}, q = 0..3",
        annihilated,
    ));
    let diag: Vec<Option<PowerSeriesQ>> = (0..5).map(|p| table[p][p].as_pure()).collect();
    out.push(Check::holds(
        "I_{p,p} are pure series",
        diag.iter().all(Option::is_some),
    ));
    let diag: Vec<PowerSeriesQ> = diag.into_iter().flatten().collect();
    if diag.len() == 5 {
        out.push(Check::holds(
            "I_{p,p}(0) = 1",
            diag.iter().all(|s| s.coeff(0).is_one()),
        ));
        out.push(Check::holds(
            "I_{p,p} = I_{4-p,4-p}",
            (0..5).all(|p| diag[p] == diag[4 - p]),
        ));
        let prod = diag.iter().skip(1).fold(diag[0].clone(), |a, b| a.mul(b));
        out.push(Check::holds(
            "prod I_{p,p} = 1/(1-729z)",
            prod == PowerSeriesQ::geometric(729, len),
        ));
    }
    let vanish = (0..5).all(|p| (0..p).all(|qd| table[p][qd].is_zero()));
    out.push(Check::holds("I_{p,q} = 0 for q < p", vanish));
    let yuk = yukawa_from_pf(&op, len)?;
    out.push(Check::holds(
        "Yukawa = 1/(1-729z)",
        yuk == PowerSeriesQ::geometric(729, len),
    ));
    let mm = mirror_map(len)?;
    out.push(Check::holds(
        "mirror map has no constant term",
        mm.j_tilde.coeff(0).is_zero(),
    ));
    out.push(Check::holds(
        "F_1A agrees with the reduced form",
        f1a_in_z(len)? == f1a_reduced(len)?,
    ));
    out.push(Check::holds(
        "L cancels in F_1A + (9/4) log Q",
        g_series(len).is_ok(),
    ));
    out.push(Check::eq("N_1^0", q(-9, 4), n1_zero()));
    Ok(out)
}

/// Computed inputs to the ledger; the heavy stages fill these in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerInputs {
    pub chi_smooth: i64,
    pub chi_y0: i64,
    pub holo: HoloReport,
    pub kpoint_orders: Vec<i64>,
    pub series_checks: Vec<Check>,
}

impl LedgerInputs {
    /// The values the pipeline is expected to produce, for perturbation tests.
    pub fn nominal(series_checks: Vec<Check>) -> Self {
        LedgerInputs {
            chi_smooth: CHI_SMOOTH,
            chi_y0: EXPECTED_CHI_Y0,
            holo: HoloReport {
                chi_o: 1,
                chi_ml1: 0,
                chi_ml2: 0,
                chi_ml1ml2: 1,
                chi_w0: 2,
                guard: 0,
                timing_ms: 0,
            },
            kpoint_orders: vec![2, 2, 4, 4],
            series_checks,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub status: String,
    pub first_failure: Option<String>,
    pub checks: Vec<Check>,
    pub inputs: LedgerInputs,
    #[serde(with = "crate::rational::serde_q")]
    pub kappa_zero: Q,
    pub points: Vec<SpecialPoint>,
    #[serde(with = "crate::rational::serde_q")]
    pub phi_order_odp: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub phi_order_odp_alternative: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub phi_order_kpoint: Q,
    pub phi: PhiDivisor,
    pub target: PhiDivisor,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub eta_exponents: Vec<Q>,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per stage; the only nondeterministic field.
    pub timing_ms: BTreeMap<String, u128>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn assumptions() -> Vec<String> {
    vec![
        "monodromy is unipotent near every degenerate fiber".into(),
        "the semistable model at psi = 0 is Kulikov (trivial evaluation divisor)".into(),
        "chi of a smooth fiber is 144 and chi(O_W1) = chi(O_W2) = 1 (cited)".into(),
    ]
}

pub fn notes() -> Vec<String> {
    vec![
        "ODP orders of eta_2, eta_3 appear with both signs in the source; -1 is used, +1 is reported as the alternative".into(),
        "a stated intermediate kappa_0 = 8 equals the value before subtracting the holomorphic terms; 4 is used".into(),
        "the L-linear term of F_1A is read as -(9/4) t rather than -(9/4) log t".into(),
        "I_{4,4} is defined by the same recursion; the symmetry and product identities are verified, not assumed".into(),
    ]
}

/// Assembles and checks the ledger from the given inputs.
pub fn verify_from(inputs: LedgerInputs) -> VerificationReport {
    let h = &inputs.holo;
    let kappa_zero = kappa_from_geometry(
        inputs.chi_smooth,
        inputs.chi_y0,
        &[h.chi_w0, CHI_W1, CHI_W2],
    );
    let mut kp = kpoint(kappa_zero.clone());
    kp.orders = inputs.kpoint_orders.iter().map(|&o| qi(o)).collect();
    let odp = odp_point();
    let odp_alt = SpecialPoint {
        orders: odp_orders_alternative(),
        ..odp.clone()
    };
    let mum = SpecialPoint {
        kind: PointKind::Mum,
        kappa: Q::zero(),
        orders: vec![Q::zero(); 4],
        kappa_provenance: "not used: the order at infinity follows from degree balance".into(),
        orders_provenance: "not used".into(),
    };
    let chi_sm = inputs.chi_smooth;
    let phi = assemble_phi(&kp, &odp, chi_sm);
    let target = target_phi();

    let mut checks = vec![
        Check::eq("chi(Y0)", EXPECTED_CHI_Y0, inputs.chi_y0),
        Check::eq("chi(O)", 1, h.chi_o),
        Check::eq("chi(O(-L1))", 0, h.chi_ml1),
        Check::eq("chi(O(-L2))", 0, h.chi_ml2),
        Check::eq("chi(O(-L1-L2))", 1, h.chi_ml1ml2),
        Check::eq("chi(O_W0)", 2, h.chi_w0),
        Check::eq("kappa_0", qi(EXPECTED_KAPPA_ZERO), kappa_zero.clone()),
        Check::eq("phi order at ODP", q(7, 6), phi_order(&odp, chi_sm)),
        Check::eq("phi order at 0", qi(-34), phi_order(&kp, chi_sm)),
        Check::eq(
            "|phi| order at 0",
            target.at_zero.clone(),
            phi.at_zero.clone(),
        ),
        Check::eq(
            "|phi| order at mu6",
            target.at_mu6.clone(),
            phi.at_mu6.clone(),
        ),
        Check::eq(
            "|phi| order at infinity",
            target.at_infinity.clone(),
            phi.at_infinity.clone(),
        ),
        Check::eq("degree of phi", Q::zero(), phi.degree()),
        Check::eq("eta_0 exponent", qi(30), eta_exponents(chi_sm)[0].clone()),
    ];
    checks.extend(inputs.series_checks.iter().cloned());
    let first_failure = checks
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.got));
    VerificationReport {
        status: if first_failure.is_none() {
            "PASS"
        } else {
            "FAIL"
        }
        .into(),
        first_failure,
        checks,
        kappa_zero,
        phi_order_odp: phi_order(&odp, chi_sm),
        phi_order_odp_alternative: phi_order(&odp_alt, chi_sm),
        phi_order_kpoint: phi_order(&kp, chi_sm),
        points: vec![kp, odp, mum],
        phi,
        target,
        eta_exponents: eta_exponents(chi_sm).to_vec(),
        assumptions: assumptions(),
        notes: notes(),
        inputs,
        timing_ms: BTreeMap::new(),
    }
}

/// Runs every stage in dependency order and assembles the report.
pub fn verify_bcov(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut timing = BTreeMap::new();
    let mut stage = |name: &str, t: Instant| {
        timing.insert(name.to_string(), t.elapsed().as_millis());
    };

    let t = Instant::now();
    let pi = build_fan_pi()?;
    let sigma = build_fan_sigma()?;
    let fan_ok = pi.rays.len() == 110
        && pi.maximal_cones.len() == 1458
        && pi.check_smooth()?
        && pi.check_complete()?
        && check_refines(&pi, &sigma)?;
    stage("fan", t);

    let t = Instant::now();
    let opts = StratumOptions {
        check_saturation: config.check_saturation,
    };
    let top = total_chi_y0(&pi, &opts)?;
    stage("chi_top", t);

    let t = Instant::now();
    let holo = holo_report(&pi, config.guard)?;
    let exact_ok = if config.exact_holo {
        let data = SmoothFanData::from_fan(&pi)?;
        let sample: Vec<usize> = (0..pi.maximal_cones.len()).step_by(97).collect();
        let mut ok = true;
        for d in pi_divisors(&pi)? {
            ok &= exact_chart_agreement(&data, &d.coeffs, &sample, config.guard)?;
        }
        Some(ok)
    } else {
        None
    };
    stage("chi_holo", t);

    let t = Instant::now();
    let mut checks = vec![Check::holds("fan certificate", fan_ok)];
    if let Some(ok) = exact_ok {
        checks.push(Check::holds("exact and truncated chart terms agree", ok));
    }
    checks.extend(series_checks(config.order)?);
    let lo = n1_invariants(config.order.min(8))?;
    let hi = n1_invariants(config.order)?;
    let stable = lo.n1.iter().all(|(d, v)| hi.n1.get(d) == Some(v));
    checks.push(Check::holds(
        "N_1^d stable under increasing the order",
        stable,
    ));
    stage("series", t);

    let inputs = LedgerInputs {
        chi_smooth: CHI_SMOOTH,
        chi_y0: top.total,
        holo,
        kpoint_orders: vec![2, 2, 4, 4],
        series_checks: checks,
    };
    let mut report = verify_from(inputs);
    report.timing_ms = timing;
    info!("verification {}", report.status);
    Ok(report)
}
