//! Certifiers for the perturbation and stability theorems.
//!
//! Each certifier checks a theorem's hypothesis, then emits the
//! theorem's closed-form bounds next to the independently computed
//! optimal bounds. Hypotheses that reduce to a single PSD pencil are
//! checked exactly; the rest get an exact sufficient Loewner test with
//! a seeded sampling fallback. A certificate *encloses* when the
//! certified bounds bracket the observed ones; the theorems guarantee
//! enclosure whenever the hypothesis holds, so any violation indicts
//! the implementation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cstar::{
    hermitian_eig, hermitian_eigenvalues, pencil_inf, pencil_sup, AlgebraElement, PencilValue,
    Tolerance,
};
use crate::error::{Error, Result};
use crate::frames::{
    frame_gram, k_frame_bounds, optimal_bounds, FrameBounds, KOperator, OperatorFrame,
};
use crate::seed::{hash_matrix, seed_from_parts};

/// Slack below which a certified bound is considered to have failed to
/// enclose the observed one, relative to max(1, observed upper bound).
pub const ENCLOSURE_EPS: f64 = 1e-9;

const FALLBACK_SAMPLES: usize = 1000;
const CONVERSE_SAMPLES: usize = 1000;

/// Which theorem a certificate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    BesselSumPlus,
    BesselSumMinus,
    MinCondition,
    MinConditionK,
    Combination,
    CombinationK,
    Extension,
    ExtensionK,
    Weighted,
    KPerturbation,
    KPerturbationCorollary,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::BesselSumPlus,
        TheoremId::BesselSumMinus,
        TheoremId::MinCondition,
        TheoremId::MinConditionK,
        TheoremId::Combination,
        TheoremId::CombinationK,
        TheoremId::Extension,
        TheoremId::ExtensionK,
        TheoremId::Weighted,
        TheoremId::KPerturbation,
        TheoremId::KPerturbationCorollary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::BesselSumPlus => "bessel-sum-plus",
            TheoremId::BesselSumMinus => "bessel-sum-minus",
            TheoremId::MinCondition => "min-condition",
            TheoremId::MinConditionK => "min-condition-k",
            TheoremId::Combination => "combination",
            TheoremId::CombinationK => "combination-k",
            TheoremId::Extension => "extension",
            TheoremId::ExtensionK => "extension-k",
            TheoremId::Weighted => "weighted",
            TheoremId::KPerturbation => "k-perturbation",
            TheoremId::KPerturbationCorollary => "k-perturbation-corollary",
        }
    }

    /// Stable code used for seed derivation and report ordering.
    pub fn code(&self) -> u64 {
        match self {
            TheoremId::BesselSumPlus => 1,
            TheoremId::BesselSumMinus => 2,
            TheoremId::MinCondition => 3,
            TheoremId::MinConditionK => 4,
            TheoremId::Combination => 5,
            TheoremId::CombinationK => 6,
            TheoremId::Extension => 7,
            TheoremId::ExtensionK => 8,
            TheoremId::Weighted => 9,
            TheoremId::KPerturbation => 10,
            TheoremId::KPerturbationCorollary => 11,
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown theorem id `{s}`")))
    }
}

/// Sign of the perturbation in the Bessel-sum theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Outcome of one certifier run.
///
/// `hypothesis_margin` is theorem-specific (documented per certifier);
/// `lower_slack = observed.lower − certified.lower` and
/// `upper_slack = certified.upper − observed.upper`, so both slacks are
/// nonnegative exactly when the certified bounds enclose the observed
/// optimum. Certified values are meaningful only when `hypothesis_ok`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub hypothesis_ok: bool,
    pub hypothesis_margin: f64,
    pub certified: FrameBounds,
    pub observed: FrameBounds,
    pub lower_slack: f64,
    pub upper_slack: f64,
    pub notes: String,
}

impl Certificate {
    fn build(
        theorem: TheoremId,
        hypothesis_ok: bool,
        hypothesis_margin: f64,
        certified: FrameBounds,
        observed: FrameBounds,
        notes: String,
    ) -> Certificate {
        Certificate {
            theorem,
            hypothesis_ok,
            hypothesis_margin,
            lower_slack: observed.lower - certified.lower,
            upper_slack: certified.upper - observed.upper,
            certified,
            observed,
            notes,
        }
    }

    /// Certified bounds bracket the observed ones up to `ENCLOSURE_EPS`
    /// relative to max(1, observed upper).
    pub fn encloses(&self) -> bool {
        let eps = ENCLOSURE_EPS * f64::max(1.0, self.observed.upper);
        self.lower_slack >= -eps && self.upper_slack >= -eps
    }
}

fn require_shared_measure(a: &OperatorFrame, b: &OperatorFrame) -> Result<()> {
    if a.algebra_dim() != b.algebra_dim() || a.module_rank() != b.module_rank() {
        return Err(Error::DimensionMismatch(format!(
            "families of shape (d={},n={}) and (d={},n={})",
            a.algebra_dim(),
            a.module_rank(),
            b.algebra_dim(),
            b.module_rank()
        )));
    }
    if a.measure() != b.measure() {
        return Err(Error::MeasureMismatch(
            "families live on different measures".into(),
        ));
    }
    Ok(())
}

/// (K-)bounds fed to the certified formulas: optimal by default, or the
/// caller's looser override after validating it really is looser.
fn effective_bounds(
    frame: &OperatorFrame,
    k: Option<&KOperator>,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<FrameBounds> {
    let optimal = match k {
        Some(k) => k_frame_bounds(frame, k, tol)?.0,
        None => optimal_bounds(frame),
    };
    match bounds_override {
        None => Ok(optimal),
        Some(user) => {
            let slack = tol.rel * f64::max(1.0, optimal.upper);
            if user.lower > optimal.lower + slack || user.upper < optimal.upper - slack {
                return Err(Error::BadParameter(format!(
                    "override ({}, {}) is tighter than the optimal bounds ({}, {})",
                    user.lower, user.upper, optimal.lower, optimal.upper
                )));
            }
            if user.lower < 0.0 || user.upper < 0.0 {
                return Err(Error::BadParameter(
                    "override bounds must be nonnegative".into(),
                ));
            }
            Ok(user)
        }
    }
}

fn observed_bounds(
    frame: &OperatorFrame,
    k: Option<&KOperator>,
    tol: &Tolerance,
) -> Result<FrameBounds> {
    Ok(match k {
        Some(k) => k_frame_bounds(frame, k, tol)?.0,
        None => optimal_bounds(frame),
    })
}

/// Perturbing a frame by a Bessel family with bound below the frame's
/// lower bound keeps it a frame, with bounds (√A∓√M)² and (√B+√M)².
///
/// `hypothesis_margin` is A − M; the hypothesis needs M < A.
pub fn certify_bessel_sum(
    frame: &OperatorFrame,
    bessel: &OperatorFrame,
    sign: Sign,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    require_shared_measure(frame, bessel)?;
    let base = effective_bounds(frame, None, bounds_override, tol)?;
    let bessel_bound = optimal_bounds(bessel).upper;
    let hypothesis_ok = bessel_bound < base.lower - tol.rel;
    let margin = base.lower - bessel_bound;

    let sqrt_a = base.lower.sqrt();
    let sqrt_b = base.upper.sqrt();
    let sqrt_m = bessel_bound.sqrt();
    let certified = FrameBounds {
        lower: (sqrt_a - sqrt_m).max(0.0).powi(2),
        upper: (sqrt_b + sqrt_m).powi(2),
    };

    let coeff = match sign {
        Sign::Plus => Complex64::new(1.0, 0.0),
        Sign::Minus => Complex64::new(-1.0, 0.0),
    };
    let combined =
        OperatorFrame::linear_combination(&[frame, bessel], &[Complex64::new(1.0, 0.0), coeff])?;
    let observed = optimal_bounds(&combined);

    let theorem = match sign {
        Sign::Plus => TheoremId::BesselSumPlus,
        Sign::Minus => TheoremId::BesselSumMinus,
    };
    let notes = format!(
        "A={:.6e} B={:.6e} M={:.6e}",
        base.lower, base.upper, bessel_bound
    );
    Ok(Certificate::build(
        theorem,
        hypothesis_ok,
        margin,
        certified,
        observed,
        notes,
    ))
}

/// Least constant M with ‖⟨(T−R)x⟩‖ ≤ M·min(‖⟨Tx⟩‖, ‖⟨Rx⟩‖) for all x.
///
/// The min-condition splits into two single-denominator conditions, each
/// equivalent to a Loewner inequality on Gram matrices, so the optimum is
/// the larger of two pencil suprema. `Unbounded` when either pencil is.
pub fn optimal_min_constant(
    frame: &OperatorFrame,
    other: &OperatorFrame,
    tol: &Tolerance,
) -> Result<PencilValue> {
    require_shared_measure(frame, other)?;
    let diff_gram = frame_gram(&frame.difference(other)?);
    let s1 = pencil_sup(&diff_gram, &frame_gram(frame), tol)?;
    let s2 = pencil_sup(&diff_gram, &frame_gram(other), tol)?;
    Ok(match (s1.value, s2.value) {
        (PencilValue::Finite(a), PencilValue::Finite(b)) => PencilValue::Finite(a.max(b)),
        _ => PencilValue::Unbounded,
    })
}

/// The min-condition theorem: a finite constant M in the two-sided ratio
/// condition makes R a (K-)frame with bounds A/(1+√M)² and B(1+√M)².
///
/// `hypothesis_margin` is the optimal constant M itself (−1 when no
/// finite constant exists). With K present, the notes also report whether
/// the converse direction applies (σ_min(K) ≥ 1, which covers
/// co-isometries).
pub fn certify_min_condition(
    frame: &OperatorFrame,
    other: &OperatorFrame,
    k: Option<&KOperator>,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    require_shared_measure(frame, other)?;
    let base = effective_bounds(frame, k, bounds_override, tol)?;
    let observed = observed_bounds(other, k, tol)?;
    let constant = optimal_min_constant(frame, other, tol)?;

    let theorem = if k.is_some() {
        TheoremId::MinConditionK
    } else {
        TheoremId::MinCondition
    };
    let mut notes = String::new();
    let (hypothesis_ok, margin, certified) = match constant {
        PencilValue::Finite(m) => {
            let grow = (1.0 + m.sqrt()).powi(2);
            notes.push_str(&format!("M_opt={m:.6e}"));
            // Closed-form constant from the converse direction, for
            // comparison; valid when R has a positive lower bound.
            if observed.lower > tol.abs_floor && base.lower > tol.abs_floor {
                let m_closed_form = f64::min(
                    (1.0 + (base.upper / observed.lower).sqrt()).powi(2),
                    (1.0 + (observed.upper / base.lower).sqrt()).powi(2),
                );
                notes.push_str(&format!(" M_closed_form={m_closed_form:.6e}"));
            }
            (
                true,
                m,
                FrameBounds {
                    lower: base.lower / grow,
                    upper: base.upper * grow,
                },
            )
        }
        PencilValue::Unbounded => {
            notes.push_str("M_opt=unbounded");
            (
                false,
                -1.0,
                FrameBounds {
                    lower: 0.0,
                    upper: 0.0,
                },
            )
        }
    };
    if let Some(k) = k {
        let converse_applicable = k.op.lower_bound() >= 1.0 - tol.rel;
        notes.push_str(&format!(" converse_applicable={converse_applicable}"));
    }
    Ok(Certificate::build(
        theorem,
        hypothesis_ok,
        margin,
        certified,
        observed,
        notes,
    ))
}

fn unit_row_candidates(grams: &[&AlgebraElement]) -> Vec<DVector<Complex64>> {
    let mut out = Vec::new();
    for g in grams {
        let (vals, vecs) = hermitian_eig(g.entries());
        if !vals.is_empty() {
            out.push(vecs.column(0).into_owned());
            out.push(vecs.column(vals.len() - 1).into_owned());
        }
    }
    out
}

/// Rank-one and dense probe vectors for norm-inequality sampling. Every
/// probe is a module vector with unit norm.
fn probe_matrices(
    d: usize,
    side: usize,
    samples: usize,
    seed: u64,
    candidates: &[DVector<Complex64>],
) -> Vec<DMatrix<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = Vec::with_capacity(samples + candidates.len());
    for v in candidates {
        let mut x = DMatrix::<Complex64>::zeros(d, side);
        for i in 0..side {
            x[(0, i)] = v[i].conj();
        }
        probes.push(x);
    }
    for _ in 0..samples {
        let x = DMatrix::from_fn(d, side, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        probes.push(x);
    }
    probes
        .into_iter()
        .filter_map(|x| {
            let n = crate::cstar::op_norm(&x);
            (n > 1e-12).then(|| x.map(|e| e / Complex64::new(n, 0.0)))
        })
        .collect()
}

fn quad_norm(x: &DMatrix<Complex64>, g: &AlgebraElement) -> f64 {
    crate::cstar::op_norm(&(x * g.entries() * x.adjoint()))
}

/// A spanning family dominated pointwise by a combination keeps the
/// combination a (K-)frame: certified bounds A_p·λ² and
/// (max|α_k|)²(Σ√B_k)².
///
/// `p` is zero-based. `hypothesis_margin` is λ, the optimal constant with
/// λ‖{T_p x}‖ ≤ ‖{Σ α_k T_k x}‖. The notes carry the converse constant
/// λ_conv = A_comb/B_p together with its sampled verification margin for
/// the squared-norm inequality.
pub fn certify_combination(
    families: &[OperatorFrame],
    alphas: &[Complex64],
    p: usize,
    k: Option<&KOperator>,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    if families.is_empty() || families.len() != alphas.len() {
        return Err(Error::CountMismatch(format!(
            "{} families with {} coefficients",
            families.len(),
            alphas.len()
        )));
    }
    if p >= families.len() {
        return Err(Error::IndexOutOfRange {
            index: p,
            count: families.len(),
        });
    }
    let refs: Vec<&OperatorFrame> = families.iter().collect();
    let combined = OperatorFrame::linear_combination(&refs, alphas)?;
    let combined_gram = frame_gram(&combined);
    let p_gram = frame_gram(&families[p]);

    let lambda_sq = pencil_inf(&combined_gram, &p_gram, tol)?.expect_finite()?;
    let lambda = lambda_sq.sqrt();
    let hypothesis_ok = lambda > tol.abs_floor;

    let a_p = effective_bounds(&families[p], k, bounds_override, tol)?.lower;
    let max_alpha = alphas.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let sum_sqrt_b: f64 = families
        .iter()
        .map(|f| optimal_bounds(f).upper.sqrt())
        .sum();
    let certified = FrameBounds {
        lower: a_p * lambda_sq,
        upper: (max_alpha * sum_sqrt_b).powi(2),
    };
    let observed = observed_bounds(&combined, k, tol)?;

    // Converse-direction constant, checked in its squared-norm form on
    // seeded probes.
    let b_p = optimal_bounds(&families[p]).upper;
    let mut notes = format!("lambda={lambda:.6e}");
    if b_p > tol.abs_floor {
        let lambda_conv = observed.lower / b_p;
        let seed = seed_from_parts([
            hash_matrix(combined_gram.entries()),
            hash_matrix(p_gram.entries()),
            0x636f_6e76,
        ]);
        let probes = probe_matrices(
            combined.algebra_dim(),
            combined.side(),
            CONVERSE_SAMPLES,
            seed,
            &unit_row_candidates(&[&combined_gram, &p_gram]),
        );
        let mut worst = f64::INFINITY;
        for x in &probes {
            let lhs = lambda_conv * quad_norm(x, &p_gram);
            let rhs = quad_norm(x, &combined_gram);
            worst = worst.min(rhs - lhs);
        }
        let converse_ok = worst >= -ENCLOSURE_EPS * f64::max(1.0, observed.upper);
        notes.push_str(&format!(
            " lambda_conv={lambda_conv:.6e} sqrt_lambda_conv={:.6e} converse_margin={worst:.6e} converse_ok={converse_ok}",
            lambda_conv.sqrt()
        ));
    }
    if let Some(k) = k {
        let kk = k.gram();
        let coiso = (&kk - &AlgebraElement::identity(kk.dim())).op_norm()
            <= tol.rel * f64::max(1.0, kk.op_norm());
        notes.push_str(&format!(" co_isometry={coiso}"));
    }

    let theorem = if k.is_some() {
        TheoremId::CombinationK
    } else {
        TheoremId::Combination
    };
    Ok(Certificate::build(
        theorem,
        hypothesis_ok,
        lambda,
        certified,
        observed,
        notes,
    ))
}

/// Least operator norm of a bounded map sending the summed source family
/// of x to the target family of x for every x: √(pencil_sup(G_target,
/// G_source)). `Unbounded` when the target Gram has mass on the kernel of
/// the source Gram, i.e. no bounded map exists.
pub fn minimal_extension_norm(
    target: &OperatorFrame,
    source: &OperatorFrame,
    tol: &Tolerance,
) -> Result<PencilValue> {
    require_shared_measure(target, source)?;
    let s = pencil_sup(&frame_gram(target), &frame_gram(source), tol)?;
    Ok(match s.value {
        PencilValue::Finite(v) => PencilValue::Finite(v.sqrt()),
        PencilValue::Unbounded => PencilValue::Unbounded,
    })
}

/// Summed perturbed families under the per-family ratio condition and a
/// bounded extension map stay (K-)frames: certified bounds A_p/‖L‖² and
/// (1+√λ)²(Σ√B_k)².
///
/// `hypothesis_margin` is λ − max_k c_k where c_k are the per-family
/// pencil constants (−1 when some pencil is unbounded); the hypothesis
/// additionally needs ‖L‖ finite.
pub fn certify_extension(
    frames: &[OperatorFrame],
    perturbed: &[OperatorFrame],
    p: usize,
    lambda_cond: f64,
    k: Option<&KOperator>,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    if frames.is_empty() || frames.len() != perturbed.len() {
        return Err(Error::CountMismatch(format!(
            "{} base families with {} perturbed families",
            frames.len(),
            perturbed.len()
        )));
    }
    if p >= frames.len() {
        return Err(Error::IndexOutOfRange {
            index: p,
            count: frames.len(),
        });
    }
    if lambda_cond.is_nan() || lambda_cond < 0.0 {
        return Err(Error::BadParameter(format!(
            "lambda must be nonnegative, got {lambda_cond}"
        )));
    }

    // Per-family ratio condition, exact via pencils.
    let mut max_ratio: Option<f64> = Some(0.0);
    for (t, r) in frames.iter().zip(perturbed) {
        require_shared_measure(t, r)?;
        let c = pencil_sup(&frame_gram(&t.difference(r)?), &frame_gram(t), tol)?;
        max_ratio = match (max_ratio, c.value) {
            (Some(acc), PencilValue::Finite(v)) => Some(acc.max(v)),
            _ => None,
        };
    }
    let cond_ok = matches!(max_ratio, Some(v) if v <= lambda_cond + tol.rel);
    let margin = max_ratio.map_or(-1.0, |v| lambda_cond - v);

    let ones = vec![Complex64::new(1.0, 0.0); perturbed.len()];
    let refs: Vec<&OperatorFrame> = perturbed.iter().collect();
    let source = OperatorFrame::linear_combination(&refs, &ones)?;
    let ext = minimal_extension_norm(&frames[p], &source, tol)?;

    let a_p = effective_bounds(&frames[p], k, bounds_override, tol)?.lower;
    let sum_sqrt_b: f64 = frames.iter().map(|f| optimal_bounds(f).upper.sqrt()).sum();
    let upper = (1.0 + lambda_cond.sqrt()).powi(2) * sum_sqrt_b.powi(2);
    let (hypothesis_ok, certified, ext_note) = match ext {
        PencilValue::Finite(l) if l > tol.abs_floor => (
            cond_ok,
            FrameBounds {
                lower: a_p / (l * l),
                upper,
            },
            format!("ext_norm={l:.6e}"),
        ),
        PencilValue::Finite(_) | PencilValue::Unbounded => (
            false,
            FrameBounds { lower: 0.0, upper },
            "ext_norm=unbounded".to_string(),
        ),
    };
    let observed = observed_bounds(&source, k, tol)?;

    let theorem = if k.is_some() {
        TheoremId::ExtensionK
    } else {
        TheoremId::Extension
    };
    let ratio_note = max_ratio.map_or("unbounded".to_string(), |v| format!("{v:.6e}"));
    let notes = format!("max_pencil={ratio_note} lambda={lambda_cond:.6e} {ext_note}");
    Ok(Certificate::build(
        theorem,
        hypothesis_ok,
        margin,
        certified,
        observed,
        notes,
    ))
}

/// Scale a frame's operators pointwise by positive reals.
fn scaled_frame(frame: &OperatorFrame, scales: &[f64]) -> Result<OperatorFrame> {
    let ops = frame
        .operators()
        .iter()
        .zip(scales)
        .map(|(op, &s)| op.scale(Complex64::new(s, 0.0)))
        .collect();
    OperatorFrame::new(frame.measure().clone(), ops)
}

/// Weighted two-sided perturbation of a K-frame: certified bounds
/// A·((1−λ)·inf α/((1+μ)·sup β))² and B·((1+λ)·sup α/((1−μ)·inf β))².
///
/// The hypothesis mixes two norms, so it is verified by an exact
/// sufficient pencil test (√pencil_sup(G_diff, G_αT) ≤ λ) with a seeded
/// sampling fallback over `samples` probes; the notes record which path
/// verified it. `hypothesis_margin` is the pencil slack on the exact path
/// and the minimal inequality slack over probes on the sampled path. The
/// certified lower bound is measured against ⟨K*x,K*x⟩.
#[allow(clippy::too_many_arguments)]
pub fn certify_weighted(
    frame: &OperatorFrame,
    perturbed: &OperatorFrame,
    alpha_w: &[f64],
    beta_w: &[f64],
    lam: f64,
    mu: f64,
    k: &KOperator,
    samples: usize,
    seed: u64,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    if !(0.0..1.0).contains(&lam) || !(0.0..1.0).contains(&mu) {
        return Err(Error::BadParameter(format!(
            "weights require 0 <= lambda, mu < 1, got lambda={lam}, mu={mu}"
        )));
    }
    require_shared_measure(frame, perturbed)?;
    let m = frame.point_count();
    if alpha_w.len() != m || beta_w.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} alpha and {} beta weights for {} points",
            alpha_w.len(),
            beta_w.len(),
            m
        )));
    }
    if alpha_w
        .iter()
        .chain(beta_w)
        .any(|&w| w.is_nan() || w <= 0.0)
    {
        return Err(Error::BadParameter(
            "pointwise weights must be positive".into(),
        ));
    }

    let alpha_t = scaled_frame(frame, alpha_w)?;
    let beta_r = scaled_frame(perturbed, beta_w)?;
    let diff_gram = frame_gram(&alpha_t.difference(&beta_r)?);
    let g_at = frame_gram(&alpha_t);
    let g_br = frame_gram(&beta_r);

    // Exact sufficient path: the lambda term alone dominates the
    // difference for every x.
    let pencil = pencil_sup(&diff_gram, &g_at, tol)?;
    let pencil_ok = matches!(pencil.value, PencilValue::Finite(v) if v.sqrt() <= lam + tol.rel);

    let (hypothesis_ok, margin, path) = if pencil_ok {
        let v = pencil.value.finite().unwrap_or(0.0);
        (true, lam - v.sqrt(), "pencil")
    } else {
        let scale = f64::max(
            1.0,
            hermitian_eigenvalues(&g_at)
                .last()
                .copied()
                .unwrap_or(0.0)
                .max(0.0)
                .sqrt()
                + hermitian_eigenvalues(&g_br)
                    .last()
                    .copied()
                    .unwrap_or(0.0)
                    .max(0.0)
                    .sqrt(),
        );
        let probe_seed = seed_from_parts([
            seed,
            hash_matrix(diff_gram.entries()),
            hash_matrix(g_at.entries()),
        ]);
        let probes = probe_matrices(
            frame.algebra_dim(),
            frame.side(),
            samples,
            probe_seed,
            &unit_row_candidates(&[&diff_gram, &g_at, &g_br]),
        );
        let mut worst = f64::INFINITY;
        for x in &probes {
            let lhs = quad_norm(x, &diff_gram).sqrt();
            let rhs = lam * quad_norm(x, &g_at).sqrt() + mu * quad_norm(x, &g_br).sqrt();
            worst = worst.min(rhs - lhs);
        }
        (worst >= -tol.rel * scale, worst, "sampled")
    };

    let base = effective_bounds(frame, Some(k), bounds_override, tol)?;
    let inf_a = alpha_w.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup_a = alpha_w.iter().cloned().fold(0.0, f64::max);
    let inf_b = beta_w.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup_b = beta_w.iter().cloned().fold(0.0, f64::max);
    let certified = FrameBounds {
        lower: base.lower * ((1.0 - lam) * inf_a / ((1.0 + mu) * sup_b)).powi(2),
        upper: base.upper * ((1.0 + lam) * sup_a / ((1.0 - mu) * inf_b)).powi(2),
    };
    let observed = observed_bounds(perturbed, Some(k), tol)?;

    let notes = format!("path={path} lower_vs=k_pencil lambda={lam:.6e} mu={mu:.6e}");
    Ok(Certificate::build(
        TheoremId::Weighted,
        hypothesis_ok,
        margin,
        certified,
        observed,
        notes,
    ))
}

/// Additive perturbation of a K-frame controlled by α·‖⟨Tx⟩‖ + β·‖⟨K*x,K*x⟩‖:
/// certified bounds A(1−√(α+β/A))² and B(1+√(α+β/A))².
///
/// Calling with α = 0 is the corollary path (the condition measured
/// against ⟨K*x,K*x⟩ alone). The hypothesis is verified by the exact
/// sufficient Loewner test P ⪯ αG_T + βKᴴK, falling back to seeded
/// sampling; `hypothesis_margin` is the bottom eigenvalue of the Loewner
/// gap on the exact path, the minimal inequality slack otherwise.
pub fn certify_k_perturbation(
    frame: &OperatorFrame,
    perturbed: &OperatorFrame,
    k: &KOperator,
    alpha: f64,
    beta: f64,
    bounds_override: Option<FrameBounds>,
    tol: &Tolerance,
) -> Result<Certificate> {
    if alpha.is_nan() || alpha < 0.0 || beta.is_nan() || beta < 0.0 {
        return Err(Error::BadParameter(format!(
            "alpha and beta must be nonnegative, got alpha={alpha}, beta={beta}"
        )));
    }
    require_shared_measure(frame, perturbed)?;
    let base = effective_bounds(frame, Some(k), bounds_override, tol)?;
    if base.lower <= tol.abs_floor {
        return Err(Error::NotAFrame("K-frame lower bound vanishes".into()));
    }
    let ratio = alpha + beta / base.lower;
    if ratio.is_nan() || ratio >= 1.0 - tol.rel {
        return Err(Error::BadParameter(format!(
            "requires alpha + beta/A < 1, got {ratio}"
        )));
    }

    let diff_gram = frame_gram(&frame.difference(perturbed)?);
    let g_t = frame_gram(frame);
    let kk = k.gram();
    let side = g_t.dim();

    // Exact sufficient Loewner test: P ⪯ alpha·G_T + beta·KᴴK.
    let mut mix = DMatrix::<Complex64>::zeros(side, side);
    mix += g_t.entries().scale(alpha);
    mix += kk.entries().scale(beta);
    let gap = AlgebraElement::new(mix - diff_gram.entries())?;
    let gap_bottom = hermitian_eigenvalues(&gap).first().copied().unwrap_or(0.0);
    let loewner_ok = gap.is_positive(tol);

    let (hypothesis_ok, margin, path) = if loewner_ok {
        (true, gap_bottom, "loewner")
    } else {
        let scale = f64::max(
            1.0,
            alpha
                * hermitian_eigenvalues(&g_t)
                    .last()
                    .copied()
                    .unwrap_or(0.0)
                    .max(0.0)
                + beta * kk.op_norm(),
        );
        let probe_seed = seed_from_parts([
            hash_matrix(diff_gram.entries()),
            hash_matrix(g_t.entries()),
            hash_matrix(kk.entries()),
        ]);
        let probes = probe_matrices(
            frame.algebra_dim(),
            frame.side(),
            FALLBACK_SAMPLES,
            probe_seed,
            &unit_row_candidates(&[&diff_gram, &g_t, &kk]),
        );
        let mut worst = f64::INFINITY;
        for x in &probes {
            let lhs = quad_norm(x, &diff_gram);
            let rhs = alpha * quad_norm(x, &g_t) + beta * quad_norm(x, &kk);
            worst = worst.min(rhs - lhs);
        }
        (worst >= -tol.rel * scale, worst, "sampled")
    };

    let shift = ratio.sqrt();
    let certified = FrameBounds {
        lower: base.lower * (1.0 - shift).powi(2),
        upper: base.upper * (1.0 + shift).powi(2),
    };
    let observed = observed_bounds(perturbed, Some(k), tol)?;

    let theorem = if alpha == 0.0 {
        TheoremId::KPerturbationCorollary
    } else {
        TheoremId::KPerturbation
    };
    let notes = format!("path={path} ratio={ratio:.6e} alpha={alpha:.6e} beta={beta:.6e}");
    Ok(Certificate::build(
        theorem,
        hypothesis_ok,
        margin,
        certified,
        observed,
        notes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::MeasureSpace;
    use crate::hilbert::ModuleOperator;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn diag_op(d: usize, entries: &[f64]) -> ModuleOperator {
        let side = entries.len();
        let m = DMatrix::from_fn(
            side,
            side,
            |i, j| {
                if i == j {
                    c(entries[i])
                } else {
                    c(0.0)
                }
            },
        );
        ModuleOperator::new(m, d).unwrap()
    }

    fn frame_of(weights: &[f64], ops: Vec<ModuleOperator>) -> OperatorFrame {
        OperatorFrame::new(MeasureSpace::new(weights.to_vec()).unwrap(), ops).unwrap()
    }

    fn scalar_frame(value: f64) -> OperatorFrame {
        frame_of(&[1.0], vec![diag_op(1, &[value])])
    }

    /// d=1, n=2: T has G = diag(4,9), R has G = diag(1,1).
    fn diagonal_pair() -> (OperatorFrame, OperatorFrame) {
        let t = frame_of(
            &[1.0, 1.0],
            vec![diag_op(1, &[2.0, 0.0]), diag_op(1, &[0.0, 3.0])],
        );
        let r = frame_of(
            &[1.0, 1.0],
            vec![diag_op(1, &[1.0, 0.0]), diag_op(1, &[0.0, 1.0])],
        );
        (t, r)
    }

    #[test]
    fn bessel_sum_diagonal_example() {
        let (t, r) = diagonal_pair();
        let cert = certify_bessel_sum(&t, &r, Sign::Plus, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.certified.lower - 1.0).abs() < 1e-12);
        assert!((cert.certified.upper - 16.0).abs() < 1e-12);
        assert!((cert.observed.lower - 9.0).abs() < 1e-12);
        assert!((cert.observed.upper - 16.0).abs() < 1e-12);
        assert!(cert.upper_slack.abs() < 1e-12); // tight
        assert!(cert.encloses());

        // Minus sign holds on the same instance.
        let cert = certify_bessel_sum(&t, &r, Sign::Minus, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok && cert.encloses());
        // G of {T−R} = diag(1,4)
        assert!((cert.observed.lower - 1.0).abs() < 1e-12);
        assert!((cert.observed.upper - 4.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_sum_zero_and_violating_perturbations() {
        let (t, _) = diagonal_pair();
        let zero = frame_of(
            &[1.0, 1.0],
            vec![ModuleOperator::zeros(1, 2), ModuleOperator::zeros(1, 2)],
        );
        let cert = certify_bessel_sum(&t, &zero, Sign::Plus, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.certified.lower - cert.observed.lower).abs() < 1e-12);
        assert!((cert.certified.upper - cert.observed.upper).abs() < 1e-12);

        // R = T violates M < A.
        let cert = certify_bessel_sum(&t, &t, Sign::Plus, None, &tol()).unwrap();
        assert!(!cert.hypothesis_ok);
    }

    #[test]
    fn bessel_scaling_halves_margin_quadratically() {
        let (t, r) = diagonal_pair();
        let cert_full = certify_bessel_sum(&t, &r, Sign::Plus, None, &tol()).unwrap();
        let s = 0.5;
        let scaled = frame_of(
            &[1.0, 1.0],
            r.operators().iter().map(|op| op.scale(c(s))).collect(),
        );
        let cert_scaled = certify_bessel_sum(&t, &scaled, Sign::Plus, None, &tol()).unwrap();
        let a = 4.0;
        let m_full = a - cert_full.hypothesis_margin;
        let m_scaled = a - cert_scaled.hypothesis_margin;
        assert!((m_scaled - s * s * m_full).abs() < 1e-10);
    }

    #[test]
    fn min_constant_scalar_examples() {
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.0);
        let m = optimal_min_constant(&t, &r, &tol()).unwrap();
        assert!((m.finite().unwrap() - 1.0).abs() < 1e-12);

        let m = optimal_min_constant(&t, &t, &tol()).unwrap();
        assert!(m.finite().unwrap() < 1e-12);

        let t1 = scalar_frame(1.0);
        let r1 = scalar_frame(-1.0);
        let m = optimal_min_constant(&t1, &r1, &tol()).unwrap();
        assert!((m.finite().unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn min_condition_scalar_example() {
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.0);
        let cert = certify_min_condition(&t, &r, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.hypothesis_margin - 1.0).abs() < 1e-12);
        assert!((cert.certified.lower - 1.0).abs() < 1e-12);
        assert!((cert.certified.upper - 16.0).abs() < 1e-12);
        assert!((cert.observed.lower - 1.0).abs() < 1e-12);
        assert!((cert.observed.upper - 1.0).abs() < 1e-12);
        assert!(cert.encloses());

        let cert = certify_min_condition(&t, &t, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok && cert.hypothesis_margin < 1e-12);
        assert!((cert.certified.lower - 4.0).abs() < 1e-10);
        assert!((cert.certified.upper - 4.0).abs() < 1e-10);
    }

    #[test]
    fn min_condition_converse_flag() {
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.0);
        let k2 = KOperator::new(ModuleOperator::identity(1, 1).scale(c(2.0)));
        let cert = certify_min_condition(&t, &r, Some(&k2), None, &tol()).unwrap();
        assert!(cert.notes.contains("converse_applicable=true"));

        let khalf = KOperator::new(ModuleOperator::identity(1, 1).scale(c(0.5)));
        let cert = certify_min_condition(&t, &r, Some(&khalf), None, &tol()).unwrap();
        assert!(cert.notes.contains("converse_applicable=false"));
    }

    #[test]
    fn combination_scalar_example() {
        let fams = vec![scalar_frame(1.0), scalar_frame(2.0)];
        let cert = certify_combination(&fams, &[c(1.0), c(1.0)], 0, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.hypothesis_margin - 3.0).abs() < 1e-9); // lambda
        assert!((cert.certified.lower - 9.0).abs() < 1e-9);
        assert!((cert.certified.upper - 9.0).abs() < 1e-9);
        assert!((cert.observed.lower - 9.0).abs() < 1e-12);
        assert!((cert.observed.upper - 9.0).abs() < 1e-12);
        assert!(cert.encloses());
        assert!(cert.notes.contains("converse_ok=true"));
    }

    #[test]
    fn combination_identity_and_cancellation() {
        let fams = vec![scalar_frame(2.0)];
        let cert = certify_combination(&fams, &[c(1.0)], 0, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.certified.lower - 4.0).abs() < 1e-10);
        assert!((cert.observed.lower - 4.0).abs() < 1e-12);
        assert!((cert.observed.upper - 4.0).abs() < 1e-12);

        let fams = vec![scalar_frame(1.5), scalar_frame(1.5)];
        let cert = certify_combination(&fams, &[c(1.0), c(-1.0)], 0, None, None, &tol()).unwrap();
        assert!(!cert.hypothesis_ok);
        assert!(cert.hypothesis_margin.abs() < 1e-9);

        assert!(matches!(
            certify_combination(&fams, &[c(1.0), c(1.0)], 5, None, None, &tol()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn extension_norm_scalar_examples() {
        let t = scalar_frame(2.0); // G = 4
        let r = scalar_frame(1.0); // G = 1
        let v = minimal_extension_norm(&t, &r, &tol()).unwrap();
        assert!((v.finite().unwrap() - 2.0).abs() < 1e-12);

        let v = minimal_extension_norm(&t, &t, &tol()).unwrap();
        assert!((v.finite().unwrap() - 1.0).abs() < 1e-12);

        let target = frame_of(&[1.0], vec![diag_op(1, &[1.0, 1.0])]);
        let source = frame_of(&[1.0], vec![diag_op(1, &[1.0, 0.0])]);
        let v = minimal_extension_norm(&target, &source, &tol()).unwrap();
        assert!(v.is_unbounded());
    }

    #[test]
    fn extension_scalar_example() {
        let t = vec![scalar_frame(2.0)];
        let r = vec![scalar_frame(1.0)];
        let cert = certify_extension(&t, &r, 0, 0.25, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.certified.lower - 1.0).abs() < 1e-12);
        assert!((cert.certified.upper - 9.0).abs() < 1e-12);
        assert!((cert.observed.lower - 1.0).abs() < 1e-12);
        assert!((cert.observed.upper - 1.0).abs() < 1e-12);
        assert!(cert.encloses());
    }

    #[test]
    fn extension_zero_perturbation_and_kernel_obstruction() {
        let t = vec![scalar_frame(2.0), scalar_frame(3.0)];
        let cert = certify_extension(&t, &t, 0, 0.0, None, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!(cert.certified.lower <= cert.observed.lower + 1e-12);
        assert!(cert.encloses());

        // Zero perturbed family: pencil needs lambda >= 1 and the
        // extension is unbounded, so the certificate is inapplicable.
        let zero = vec![frame_of(&[1.0], vec![ModuleOperator::zeros(1, 1)])];
        let base = vec![scalar_frame(2.0)];
        let cert = certify_extension(&base, &zero, 0, 1.0, None, None, &tol()).unwrap();
        assert!(!cert.hypothesis_ok);
        assert!(cert.notes.contains("ext_norm=unbounded"));
    }

    #[test]
    fn weighted_identity_and_scaling_examples() {
        let t = scalar_frame(2.0);
        let k = KOperator::identity(1, 1);

        // R = T, unit weights, lambda = mu = 0: everything is tight.
        let cert =
            certify_weighted(&t, &t, &[1.0], &[1.0], 0.0, 0.0, &k, 64, 7, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!(cert.notes.contains("path=pencil"));
        assert!((cert.certified.lower - 4.0).abs() < 1e-10);
        assert!((cert.certified.upper - 4.0).abs() < 1e-10);
        assert!((cert.observed.lower - 4.0).abs() < 1e-12);
        assert!(cert.encloses());

        // alpha = 2, beta = 1, R = 2T: certified and observed scale by 4.
        let r2 = frame_of(&[1.0], vec![diag_op(1, &[4.0])]);
        let cert =
            certify_weighted(&t, &r2, &[2.0], &[1.0], 0.0, 0.0, &k, 64, 7, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!((cert.certified.lower - 16.0).abs() < 1e-10);
        assert!((cert.observed.lower - 16.0).abs() < 1e-12);
        assert!(cert.encloses());

        // boundary: lambda = 1 rejected, lambda just below 1 accepted.
        assert!(matches!(
            certify_weighted(&t, &t, &[1.0], &[1.0], 1.0, 0.0, &k, 8, 7, None, &tol()),
            Err(Error::BadParameter(_))
        ));
        assert!(
            certify_weighted(&t, &t, &[1.0], &[1.0], 0.99, 0.0, &k, 8, 7, None, &tol()).is_ok()
        );
    }

    #[test]
    fn weighted_sampled_path_uses_mu_term() {
        // The lambda term alone cannot dominate the difference, but the
        // mu term closes the gap; only the sampling path can see that.
        let t = scalar_frame(2.0);
        let r = frame_of(&[1.0], vec![diag_op(1, &[1.5])]);
        let k = KOperator::identity(1, 1);
        let cert =
            certify_weighted(&t, &r, &[1.0], &[1.0], 0.2, 0.5, &k, 128, 3, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!(cert.notes.contains("path=sampled"));
        assert!(cert.hypothesis_margin > 0.0);
        assert!(cert.encloses());
    }

    #[test]
    fn k_perturbation_sampling_fallback_rejects_violations() {
        // alpha understates the actual perturbation, so both the exact
        // test and the sampling fallback must report the hypothesis
        // unsatisfied.
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.0); // difference gram 1 vs alpha*G_T = 0.4
        let k = KOperator::identity(1, 1);
        let cert = certify_k_perturbation(&t, &r, &k, 0.1, 0.0, None, &tol()).unwrap();
        assert!(!cert.hypothesis_ok);
        assert!(cert.notes.contains("path=sampled"));
        assert!(cert.hypothesis_margin < 0.0);
    }

    #[test]
    fn k_perturbation_scalar_example() {
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.5);
        let k = KOperator::identity(1, 1);
        let cert = certify_k_perturbation(&t, &r, &k, 0.0625, 0.0, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert!(cert.notes.contains("path=loewner"));
        assert_eq!(cert.theorem, TheoremId::KPerturbation);
        assert!((cert.certified.lower - 2.25).abs() < 1e-12);
        assert!((cert.certified.upper - 6.25).abs() < 1e-12);
        assert!((cert.observed.lower - 2.25).abs() < 1e-12);
        assert!((cert.observed.upper - 2.25).abs() < 1e-12);
        assert!(cert.encloses());

        // Identity perturbation at alpha = beta = 0.
        let cert = certify_k_perturbation(&t, &t, &k, 0.0, 0.0, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert_eq!(cert.theorem, TheoremId::KPerturbationCorollary);
        assert!((cert.certified.lower - cert.observed.lower).abs() < 1e-12);
        assert!((cert.certified.upper - cert.observed.upper).abs() < 1e-12);

        // Boundary alpha + beta/A = 1 rejected.
        assert!(matches!(
            certify_k_perturbation(&t, &r, &k, 1.0, 0.0, None, &tol()),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn k_perturbation_corollary_path() {
        // Corollary: alpha = 0, condition against the K gram alone.
        let t = scalar_frame(2.0);
        let r = scalar_frame(1.9);
        let k = KOperator::identity(1, 1);
        // P = 0.01 <= beta·KᴴK needs beta >= 0.01; A = 4.
        let cert = certify_k_perturbation(&t, &r, &k, 0.0, 0.02, None, &tol()).unwrap();
        assert!(cert.hypothesis_ok);
        assert_eq!(cert.theorem, TheoremId::KPerturbationCorollary);
        let shift = (0.02f64 / 4.0).sqrt();
        assert!((cert.certified.lower - 4.0 * (1.0 - shift).powi(2)).abs() < 1e-12);
        assert!(cert.encloses());
    }

    #[test]
    fn min_constant_is_finite_whenever_other_is_a_frame() {
        // Forward direction of the equivalence: a frame companion always
        // admits a finite constant.
        let t = tol();
        for seed in 0..50u64 {
            let frame = crate::harness::random_frame(seed, 2, 2, 3, 5.0).unwrap();
            let other =
                crate::harness::random_frame_sharing_measure(seed ^ 0xbeef, &frame, 8.0).unwrap();
            assert!(crate::frames::classify(&other, &t).is_frame);
            let m = optimal_min_constant(&frame, &other, &t).unwrap();
            assert!(m.finite().is_some());
            let cert = certify_min_condition(&frame, &other, None, None, &t).unwrap();
            assert!(cert.hypothesis_ok && cert.encloses());
        }
    }

    #[test]
    fn combination_converse_constant_verifies_on_samples() {
        for seed in 0..20u64 {
            let base = crate::harness::random_frame(seed, 1, 3, 2, 4.0).unwrap();
            let second =
                crate::harness::random_frame_sharing_measure(seed ^ 0x77, &base, 6.0).unwrap();
            let fams = vec![base, second];
            let alphas = [c(1.0), Complex64::new(0.4, 0.3)];
            let cert = certify_combination(&fams, &alphas, 1, None, None, &tol()).unwrap();
            assert!(cert.notes.contains("converse_ok=true"), "{}", cert.notes);
        }
    }

    #[test]
    fn bounds_override_is_validated() {
        let (t, r) = diagonal_pair();
        // Looser bounds pass and weaken the certified interval.
        let loose = FrameBounds {
            lower: 2.0,
            upper: 16.0,
        };
        let cert = certify_bessel_sum(&t, &r, Sign::Plus, Some(loose), &tol()).unwrap();
        assert!(cert.hypothesis_ok && cert.encloses());
        assert!((cert.certified.lower - (2.0f64.sqrt() - 1.0).powi(2)).abs() < 1e-12);

        // Tighter-than-optimal bounds are rejected.
        let bogus = FrameBounds {
            lower: 5.0,
            upper: 16.0,
        };
        assert!(matches!(
            certify_bessel_sum(&t, &r, Sign::Plus, Some(bogus), &tol()),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn measure_mismatch_is_rejected() {
        let t = scalar_frame(1.0);
        let r = frame_of(&[2.0], vec![diag_op(1, &[1.0])]);
        assert!(matches!(
            certify_bessel_sum(&t, &r, Sign::Plus, None, &tol()),
            Err(Error::MeasureMismatch(_))
        ));
    }
}
