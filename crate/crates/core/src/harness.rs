//! Seeded instance generation and verification campaigns.
//!
//! `random_frame` manufactures frames with a prescribed Gram condition
//! number, the per-theorem generators manufacture hypothesis-satisfying
//! perturbations of them, and `run_campaign` certifies the lot and
//! aggregates slack statistics. Per-trial randomness is derived from
//! (campaign seed, theorem code, trial index), so reports are a pure
//! function of the configuration.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cstar::{hermitian_eig, AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::frames::{
    classify, frame_gram, optimal_bounds, FrameBounds, KOperator, MeasureSpace, OperatorFrame,
};
use crate::hilbert::ModuleOperator;
use crate::perturbation::{
    certify_bessel_sum, certify_combination, certify_extension, certify_k_perturbation,
    certify_min_condition, certify_weighted, Certificate, Sign, TheoremId,
};
use crate::seed::seed_from_parts;

/// Campaign parameters. `dims` lists the (d, n, m) triples a trial may
/// draw from.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<(usize, usize, usize)>,
    pub theorems: Vec<TheoremId>,
    pub tolerance: Tolerance,
}

impl CampaignConfig {
    /// d ∈ {1,2,3}, n ∈ {1,…,4}, m ∈ {1,…,16}.
    pub fn default_dims() -> Vec<(usize, usize, usize)> {
        let mut dims = Vec::new();
        for d in 1..=3 {
            for n in 1..=4 {
                for m in 1..=16 {
                    dims.push((d, n, m));
                }
            }
        }
        dims
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::BadParameter(
                "campaign needs at least one trial".into(),
            ));
        }
        if self.dims.is_empty() {
            return Err(Error::BadParameter(
                "campaign needs at least one dim triple".into(),
            ));
        }
        if let Some(&(d, n, m)) = self
            .dims
            .iter()
            .find(|&&(d, n, m)| d == 0 || n == 0 || m == 0)
        {
            return Err(Error::BadParameter(format!(
                "dims must be positive, got {d}x{n}x{m}"
            )));
        }
        if self.theorems.is_empty() {
            return Err(Error::BadParameter(
                "campaign needs at least one theorem".into(),
            ));
        }
        Ok(())
    }
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 0,
            trials: 200,
            dims: CampaignConfig::default_dims(),
            theorems: TheoremId::ALL.to_vec(),
            tolerance: Tolerance::default(),
        }
    }
}

/// Per-theorem aggregates. `tightness_histogram` buckets the quotient
/// certified.lower / observed.lower of hypothesis-satisfying trials into
/// [0.99, 1], [0.9, 0.99), [0.5, 0.9), [0.1, 0.5), [0, 0.1).
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremStats {
    pub trials: usize,
    pub hypotheses_satisfied: usize,
    pub enclosure_failures: usize,
    pub min_lower_slack: f64,
    pub min_upper_slack: f64,
    pub tightness_histogram: [usize; 5],
}

impl TheoremStats {
    fn new() -> Self {
        TheoremStats {
            trials: 0,
            hypotheses_satisfied: 0,
            enclosure_failures: 0,
            min_lower_slack: 0.0,
            min_upper_slack: 0.0,
            tightness_histogram: [0; 5],
        }
    }

    fn absorb(&mut self, cert: &Certificate) {
        self.trials += 1;
        if !cert.hypothesis_ok {
            return;
        }
        if self.hypotheses_satisfied == 0 {
            self.min_lower_slack = cert.lower_slack;
            self.min_upper_slack = cert.upper_slack;
        } else {
            self.min_lower_slack = self.min_lower_slack.min(cert.lower_slack);
            self.min_upper_slack = self.min_upper_slack.min(cert.upper_slack);
        }
        self.hypotheses_satisfied += 1;
        if !cert.encloses() {
            self.enclosure_failures += 1;
        }
        let q = if cert.observed.lower > 0.0 {
            (cert.certified.lower / cert.observed.lower).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let bucket = if q >= 0.99 {
            0
        } else if q >= 0.9 {
            1
        } else if q >= 0.5 {
            2
        } else if q >= 0.1 {
            3
        } else {
            4
        };
        self.tightness_histogram[bucket] += 1;
    }
}

/// One certified trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub theorem: TheoremId,
    pub trial: usize,
    pub certificate: Certificate,
}

/// Campaign outcome: per-theorem aggregates in theorem-code order plus
/// the raw per-trial records. Wall time is informational and excluded
/// from canonical serializations.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub stats: Vec<(TheoremId, TheoremStats)>,
    pub records: Vec<TrialRecord>,
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn total_enclosure_failures(&self) -> usize {
        self.stats.iter().map(|(_, s)| s.enclosure_failures).sum()
    }

    pub fn total_hypothesis_failures(&self) -> usize {
        self.stats
            .iter()
            .map(|(_, s)| s.trials - s.hypotheses_satisfied)
            .sum()
    }
}

fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random unitary from the QR factorization of a dense random matrix.
fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    let qr = random_complex(rng, n, n).qr();
    qr.q()
}

/// Hermitian square root of a positive definite matrix given spectrally.
fn spectral_pow(vals: &[f64], vecs: &DMatrix<Complex64>, exponent: f64) -> DMatrix<Complex64> {
    let n = vals.len();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        let s = Complex64::new(v.max(0.0).powf(exponent), 0.0);
        let col = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * s;
            }
        }
    }
    out
}

/// Frame with `m` operators, unit-mean weights, and a Gram condition
/// number matching `condition_target`: a random Gram with the prescribed
/// spectrum is factorized back into m weighted PSD summands. When the
/// module is one-dimensional (n·d = 1) the Gram is scalar and its
/// condition number is always 1.
pub fn random_frame(
    seed: u64,
    d: usize,
    n: usize,
    m: usize,
    condition_target: f64,
) -> Result<OperatorFrame> {
    if d == 0 || n == 0 || m == 0 {
        return Err(Error::BadParameter(format!(
            "dims must be positive, got d={d} n={n} m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Unit-mean weights.
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..1.5)).collect();
    let mean = raw.iter().sum::<f64>() / m as f64;
    let weights: Vec<f64> = raw.iter().map(|w| w / mean).collect();
    build_frame(
        &mut rng,
        d,
        n,
        MeasureSpace::new(weights)?,
        condition_target,
    )
}

/// Like [`random_frame`], but on the measure (and shape) of an existing
/// frame, so the two can enter shared-measure certifiers together.
pub fn random_frame_sharing_measure(
    seed: u64,
    like: &OperatorFrame,
    condition_target: f64,
) -> Result<OperatorFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_frame(
        &mut rng,
        like.algebra_dim(),
        like.module_rank(),
        like.measure().clone(),
        condition_target,
    )
}

fn build_frame(
    rng: &mut impl Rng,
    d: usize,
    n: usize,
    measure: MeasureSpace,
    condition_target: f64,
) -> Result<OperatorFrame> {
    if condition_target.is_nan() || condition_target < 1.0 {
        return Err(Error::BadParameter(format!(
            "condition target must be at least 1, got {condition_target}"
        )));
    }
    let side = n * d;
    let m = measure.point_count();
    let weights = measure.weights().to_vec();

    // Target Gram: prescribed geometric spectrum in a random frame of
    // eigenvectors, with a mild random overall scale.
    let scale = rng.random_range(0.5..2.0);
    let spectrum: Vec<f64> = (0..side)
        .map(|i| {
            let t = if side > 1 {
                i as f64 / (side - 1) as f64
            } else {
                0.0
            };
            scale * condition_target.powf(t)
        })
        .collect();
    let u = random_unitary(rng, side);
    let mut target = DMatrix::<Complex64>::zeros(side, side);
    for (i, &s) in spectrum.iter().enumerate() {
        let col = u.column(i);
        for r in 0..side {
            for c in 0..side {
                target[(r, c)] += col[r] * col[c].conj() * Complex64::new(s, 0.0);
            }
        }
    }

    // Split the target into m weighted PSD summands: whiten a random
    // weighted sum and push the target's square root through it.
    let factors: Vec<DMatrix<Complex64>> =
        (0..m).map(|_| random_complex(rng, side, side)).collect();
    let mut pot = DMatrix::<Complex64>::zeros(side, side);
    for (f, &w) in factors.iter().zip(&weights) {
        pot += (f * f.adjoint()).scale(w);
    }
    let (pvals, pvecs) = hermitian_eig(&pot);
    if pvals.first().copied().unwrap_or(0.0) <= 0.0 {
        // Degenerate draw; zero-probability event, but keep determinism.
        return Err(Error::BadParameter(
            "degenerate random factorization".into(),
        ));
    }
    let (tvals, tvecs) = hermitian_eig(&target);
    let sqrt_target = spectral_pow(&tvals, &tvecs, 0.5);
    let inv_sqrt_pot = spectral_pow(&pvals, &pvecs, -0.5);
    let carrier = &sqrt_target * &inv_sqrt_pot;

    let ops = factors
        .into_iter()
        .map(|f| ModuleOperator::new(&carrier * f, d))
        .collect::<Result<Vec<_>>>()?;
    OperatorFrame::new(measure, ops)
}

/// Bessel perturbation below a frame: random family on the same measure
/// rescaled so that its upper bound is exactly `ratio` times the frame's
/// lower bound.
pub fn random_bessel_below(
    seed: u64,
    frame: &OperatorFrame,
    ratio: f64,
    tol: &Tolerance,
) -> Result<OperatorFrame> {
    if ratio.is_nan() || ratio <= 0.0 || ratio >= 1.0 {
        return Err(Error::BadParameter(format!(
            "ratio must lie in (0,1), got {ratio}"
        )));
    }
    let class = classify(frame, tol);
    if !class.is_frame {
        return Err(Error::NotAFrame(
            "cannot scale a Bessel family below a non-frame".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, side, m) = (frame.algebra_dim(), frame.side(), frame.point_count());
    let ops: Vec<ModuleOperator> = (0..m)
        .map(|_| ModuleOperator::new(random_complex(&mut rng, side, side), d))
        .collect::<Result<Vec<_>>>()?;
    let raw = OperatorFrame::new(frame.measure().clone(), ops)?;
    let raw_upper = optimal_bounds(&raw).upper;
    if raw_upper <= tol.abs_floor {
        return Err(Error::BadParameter("degenerate random family".into()));
    }
    let target = ratio * class.bounds.lower;
    let factor = Complex64::new((target / raw_upper).sqrt(), 0.0);
    let scaled = raw.operators().iter().map(|op| op.scale(factor)).collect();
    OperatorFrame::new(frame.measure().clone(), scaled)
}

/// Sampled upper bound for the sup-pencil of (P, Q): the best Rayleigh
/// quotient over seeded random directions, the eigenvectors of Q, and any
/// caller-supplied candidate directions. Never exceeds the pencil value.
/// `None` when no direction clears the denominator tolerance.
pub fn sampling_oracle_sup(
    p: &AlgebraElement,
    q: &AlgebraElement,
    n_samples: usize,
    seed: u64,
    candidates: &[DVector<Complex64>],
    tol: &Tolerance,
) -> Option<f64> {
    ratio_scan(p, q, n_samples, seed, candidates, tol, false)
}

/// Sampled counterpart of the inf-pencil: random directions are projected
/// onto the retained range of Q before evaluating, matching the pencil's
/// domain.
pub fn sampling_oracle_inf(
    p: &AlgebraElement,
    q: &AlgebraElement,
    n_samples: usize,
    seed: u64,
    candidates: &[DVector<Complex64>],
    tol: &Tolerance,
) -> Option<f64> {
    ratio_scan(p, q, n_samples, seed, candidates, tol, true)
}

fn ratio_scan(
    p: &AlgebraElement,
    q: &AlgebraElement,
    n_samples: usize,
    seed: u64,
    candidates: &[DVector<Complex64>],
    tol: &Tolerance,
    lower: bool,
) -> Option<f64> {
    let dim = q.dim();
    let (qvals, qvecs) = hermitian_eig(q.entries());
    let lam_max = qvals.last().copied().unwrap_or(0.0);
    let den_floor = f64::max(tol.abs_floor, tol.rel * lam_max.max(0.0));

    // For the inf variant, restrict directions to the retained range.
    let projector = if lower {
        let cut = tol.rel * lam_max;
        let retained: Vec<usize> = (0..dim).filter(|&k| qvals[k] > cut).collect();
        if retained.is_empty() {
            return None;
        }
        let mut basis = DMatrix::<Complex64>::zeros(dim, retained.len());
        for (dst, &src) in retained.iter().enumerate() {
            basis.set_column(dst, &qvecs.column(src));
        }
        Some(&basis * basis.adjoint())
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<f64> = None;
    let mut consider = |v: DVector<Complex64>| {
        let v = match &projector {
            Some(proj) => proj * v,
            None => v,
        };
        let den = (v.adjoint() * q.entries() * &v)[(0, 0)].re;
        if den > den_floor * v.norm_squared() {
            let num = (v.adjoint() * p.entries() * &v)[(0, 0)].re.max(0.0);
            let ratio = num / den;
            best = Some(match best {
                None => ratio,
                Some(b) => {
                    if lower {
                        b.min(ratio)
                    } else {
                        b.max(ratio)
                    }
                }
            });
        }
    };

    for k in 0..dim {
        consider(qvecs.column(k).into_owned());
    }
    for v in candidates {
        consider(v.clone());
    }
    for _ in 0..n_samples {
        let v = DVector::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if v.norm() > 0.0 {
            consider(v);
        }
    }
    best
}

fn trial_rng(cfg_seed: u64, theorem: TheoremId, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_parts([cfg_seed, theorem.code(), trial as u64]))
}

fn pick_dims(rng: &mut impl Rng, dims: &[(usize, usize, usize)]) -> (usize, usize, usize) {
    dims[rng.random_range(0..dims.len())]
}

/// Random K with full rank; every fifth draw is a scaled unitary.
fn random_k(rng: &mut impl Rng, d: usize, n: usize) -> KOperator {
    let side = n * d;
    if rng.random_range(0..5usize) == 0 {
        let c = rng.random_range(0.5..2.0);
        let u = random_unitary(rng, side).scale(c);
        KOperator::new(ModuleOperator::new(u, d).expect("square"))
    } else {
        KOperator::new(ModuleOperator::new(random_complex(rng, side, side), d).expect("square"))
    }
}

/// Random perturbed family R = T − s·D with s chosen so that the summed
/// difference Grams stay below `ratio_cap` times the reference Gram in
/// the pencil sense.
fn perturb_within_pencil(
    rng: &mut impl Rng,
    frame: &OperatorFrame,
    reference: &AlgebraElement,
    ratio_cap: f64,
    tol: &Tolerance,
) -> Result<OperatorFrame> {
    let (d, side) = (frame.algebra_dim(), frame.side());
    let dir: Vec<ModuleOperator> = (0..frame.point_count())
        .map(|_| ModuleOperator::new(random_complex(rng, side, side), d))
        .collect::<Result<Vec<_>>>()?;
    let dir_frame = OperatorFrame::new(frame.measure().clone(), dir)?;
    let dir_gram = frame_gram(&dir_frame);
    let sup = crate::cstar::pencil_sup(&dir_gram, reference, tol)?
        .expect_finite()
        .unwrap_or(f64::INFINITY);
    let s = if sup > 0.0 {
        (ratio_cap / sup).sqrt()
    } else {
        0.0
    };
    let ops = frame
        .operators()
        .iter()
        .zip(dir_frame.operators())
        .map(|(t, dop)| t - &dop.scale(Complex64::new(s, 0.0)))
        .collect();
    OperatorFrame::new(frame.measure().clone(), ops)
}

/// Generate a hypothesis-satisfying instance for `theorem` and certify it.
fn run_trial(cfg: &CampaignConfig, theorem: TheoremId, trial: usize) -> Result<Certificate> {
    let tol = &cfg.tolerance;
    let mut rng = trial_rng(cfg.seed, theorem, trial);
    let (d, n, m) = pick_dims(&mut rng, &cfg.dims);
    let cond = rng.random_range(1.0..20.0);
    let frame_seed = rng.random::<u64>();
    let frame = random_frame(frame_seed, d, n, m, cond)?;

    match theorem {
        TheoremId::BesselSumPlus | TheoremId::BesselSumMinus => {
            let ratio = rng.random_range(0.05..0.9);
            let bessel = random_bessel_below(rng.random::<u64>(), &frame, ratio, tol)?;
            let sign = if theorem == TheoremId::BesselSumPlus {
                Sign::Plus
            } else {
                Sign::Minus
            };
            certify_bessel_sum(&frame, &bessel, sign, None, tol)
        }
        TheoremId::MinCondition | TheoremId::MinConditionK => {
            let other_seed = rng.random::<u64>();
            let other_cond = rng.random_range(1.0..20.0);
            let other = random_frame_sharing_measure(other_seed, &frame, other_cond)?;
            let k = (theorem == TheoremId::MinConditionK).then(|| random_k(&mut rng, d, n));
            certify_min_condition(&frame, &other, k.as_ref(), None, tol)
        }
        TheoremId::Combination | TheoremId::CombinationK => {
            let count = rng.random_range(2..4usize);
            let mut families = vec![frame];
            for _ in 1..count {
                let seed = rng.random::<u64>();
                let cond = rng.random_range(1.0..20.0);
                families.push(random_frame_sharing_measure(seed, &families[0], cond)?);
            }
            let alphas: Vec<Complex64> = (0..count)
                .map(|_| Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5)))
                .collect();
            let p = rng.random_range(0..count);
            let k = (theorem == TheoremId::CombinationK).then(|| random_k(&mut rng, d, n));
            certify_combination(&families, &alphas, p, k.as_ref(), None, tol)
        }
        TheoremId::Extension | TheoremId::ExtensionK => {
            let count = rng.random_range(1..4usize);
            let lambda_cond = rng.random_range(0.05..0.5);
            let mut bases = vec![frame];
            for _ in 1..count {
                let seed = rng.random::<u64>();
                let cond = rng.random_range(1.0..20.0);
                bases.push(random_frame_sharing_measure(seed, &bases[0], cond)?);
            }
            let perturbed = bases
                .iter()
                .map(|t| {
                    perturb_within_pencil(&mut rng, t, &frame_gram(t), 0.81 * lambda_cond, tol)
                })
                .collect::<Result<Vec<_>>>()?;
            let p = rng.random_range(0..count);
            let k = (theorem == TheoremId::ExtensionK).then(|| random_k(&mut rng, d, n));
            certify_extension(&bases, &perturbed, p, lambda_cond, k.as_ref(), None, tol)
        }
        TheoremId::Weighted => {
            let k = random_k(&mut rng, d, n);
            let lam = rng.random_range(0.1..0.9);
            let mu = rng.random_range(0.0..0.9);
            let alpha_w: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..2.0)).collect();
            let beta_w: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..2.0)).collect();
            // R_j = (alpha_j/beta_j)·T_j − s·D_j keeps the difference small
            // against the alpha-scaled frame.
            let alpha_t = {
                let ops = frame
                    .operators()
                    .iter()
                    .zip(&alpha_w)
                    .map(|(op, &a)| op.scale(Complex64::new(a, 0.0)))
                    .collect();
                OperatorFrame::new(frame.measure().clone(), ops)?
            };
            let scaled_to_beta = {
                let ops = frame
                    .operators()
                    .iter()
                    .zip(alpha_w.iter().zip(&beta_w))
                    .map(|(op, (&a, &b))| op.scale(Complex64::new(a / b, 0.0)))
                    .collect();
                OperatorFrame::new(frame.measure().clone(), ops)?
            };
            let g_at = frame_gram(&alpha_t);
            // Perturb in beta-scaled coordinates so the scaled difference
            // stays within the pencil budget.
            let dir: Vec<ModuleOperator> = (0..m)
                .map(|_| {
                    ModuleOperator::new(random_complex(&mut rng, n * d, n * d), d).expect("square")
                })
                .collect();
            let beta_dir = OperatorFrame::new(
                frame.measure().clone(),
                dir.iter()
                    .zip(&beta_w)
                    .map(|(op, &b)| op.scale(Complex64::new(b, 0.0)))
                    .collect(),
            )?;
            let sup = crate::cstar::pencil_sup(&frame_gram(&beta_dir), &g_at, tol)?
                .expect_finite()
                .unwrap_or(f64::INFINITY);
            let budget = 0.81 * lam * lam;
            let s = if sup > 0.0 {
                (budget / sup).sqrt()
            } else {
                0.0
            };
            let perturbed_ops = scaled_to_beta
                .operators()
                .iter()
                .zip(&dir)
                .map(|(t, dop)| t - &dop.scale(Complex64::new(s, 0.0)))
                .collect();
            let perturbed = OperatorFrame::new(frame.measure().clone(), perturbed_ops)?;
            let samples = 200;
            certify_weighted(
                &frame,
                &perturbed,
                &alpha_w,
                &beta_w,
                lam,
                mu,
                &k,
                samples,
                rng.random::<u64>(),
                None,
                tol,
            )
        }
        TheoremId::KPerturbation | TheoremId::KPerturbationCorollary => {
            let k = random_k(&mut rng, d, n);
            let (kb, is_k) = crate::frames::k_frame_bounds(&frame, &k, tol)?;
            if !is_k {
                return Err(Error::NotAFrame("generated frame is not a K-frame".into()));
            }
            let (alpha, beta) = if theorem == TheoremId::KPerturbationCorollary {
                (0.0, rng.random_range(0.1..0.8) * kb.lower)
            } else {
                let alpha = rng.random_range(0.05..0.5);
                let beta = rng.random_range(0.0..(0.9 - alpha)) * kb.lower;
                (alpha, beta)
            };
            // Budget the difference Gram against alpha·G_T + beta·KᴴK.
            let side = frame.side();
            let mut reference = DMatrix::<Complex64>::zeros(side, side);
            reference += frame_gram(&frame).entries().scale(alpha);
            reference += k.gram().entries().scale(beta);
            let reference = AlgebraElement::new(reference)?;
            let perturbed = perturb_within_pencil(&mut rng, &frame, &reference, 0.81, tol)?;
            certify_k_perturbation(&frame, &perturbed, &k, alpha, beta, None, tol)
        }
    }
}

/// Run every configured theorem for every trial index. Trials are
/// independent and seeded individually; failures inside a trial are
/// recorded as unsatisfied hypotheses rather than thrown.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut theorems = cfg.theorems.clone();
    theorems.sort_by_key(TheoremId::code);
    theorems.dedup();

    let mut stats: Vec<(TheoremId, TheoremStats)> =
        theorems.iter().map(|&t| (t, TheoremStats::new())).collect();
    let mut records = Vec::with_capacity(theorems.len() * cfg.trials);

    for (slot, &theorem) in theorems.iter().enumerate() {
        for trial in 0..cfg.trials {
            let certificate = match run_trial(cfg, theorem, trial) {
                Ok(cert) => cert,
                Err(err) => Certificate {
                    theorem,
                    hypothesis_ok: false,
                    hypothesis_margin: -1.0,
                    certified: FrameBounds {
                        lower: 0.0,
                        upper: 0.0,
                    },
                    observed: FrameBounds {
                        lower: 0.0,
                        upper: 0.0,
                    },
                    lower_slack: 0.0,
                    upper_slack: 0.0,
                    notes: format!("generation error: {err}"),
                },
            };
            stats[slot].1.absorb(&certificate);
            records.push(TrialRecord {
                theorem,
                trial,
                certificate,
            });
        }
    }

    Ok(CampaignReport {
        stats,
        records,
        wall_time: start.elapsed(),
    })
}
