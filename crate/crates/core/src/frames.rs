//! Operator frames and K-operator frames: Gram and frame operators,
//! optimal spectral bounds, classification, analysis/synthesis maps.
//!
//! A frame here is a finite weighted family {(μ_j, M_j)} of module
//! operators. Its Gram matrix G = Σ_j μ_j M_j M_jᴴ carries everything:
//! the weighted sum Σ_j μ_j ⟨M_j x, M_j x⟩ equals X·G·Xᴴ, so the optimal
//! frame bounds are the extreme eigenvalues of G, and the K-frame lower
//! bound is the PSD pencil of G against KᴴK.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cstar::{hermitian_eigenvalues, pencil_inf, AlgebraElement, PencilValue, Tolerance};
use crate::error::{Error, Result};
use crate::hilbert::{L2Family, ModuleOperator, ModuleVector};

/// Finite measure space: strictly positive point masses.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadParameter(
                "measure needs at least one point".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::BadParameter(format!(
                "measure weight {w} is not positive"
            )));
        }
        Ok(MeasureSpace { weights })
    }

    pub fn point_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Weighted family of module operators, one per measure point.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFrame {
    measure: MeasureSpace,
    operators: Vec<ModuleOperator>,
}

impl OperatorFrame {
    pub fn new(measure: MeasureSpace, operators: Vec<ModuleOperator>) -> Result<Self> {
        if operators.len() != measure.point_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} operators for {} measure points",
                operators.len(),
                measure.point_count()
            )));
        }
        let (d, n) = (operators[0].algebra_dim(), operators[0].module_rank());
        for (k, op) in operators.iter().enumerate() {
            if op.algebra_dim() != d || op.module_rank() != n {
                return Err(Error::DimensionMismatch(format!(
                    "operator {k} has shape (d={},n={}), expected (d={d},n={n})",
                    op.algebra_dim(),
                    op.module_rank()
                )));
            }
        }
        Ok(OperatorFrame { measure, operators })
    }

    pub fn measure(&self) -> &MeasureSpace {
        &self.measure
    }

    pub fn operators(&self) -> &[ModuleOperator] {
        &self.operators
    }

    pub fn algebra_dim(&self) -> usize {
        self.operators[0].algebra_dim()
    }

    pub fn module_rank(&self) -> usize {
        self.operators[0].module_rank()
    }

    pub fn side(&self) -> usize {
        self.operators[0].side()
    }

    pub fn point_count(&self) -> usize {
        self.measure.point_count()
    }

    /// Same measure (weights compared exactly) and operator shape.
    pub fn shares_measure_with(&self, other: &OperatorFrame) -> bool {
        self.measure == other.measure
            && self.algebra_dim() == other.algebra_dim()
            && self.module_rank() == other.module_rank()
    }

    /// Pointwise combination Σ_k coeff_k · F_k over frames sharing a measure.
    pub fn linear_combination(
        frames: &[&OperatorFrame],
        coeffs: &[Complex64],
    ) -> Result<OperatorFrame> {
        if frames.is_empty() || frames.len() != coeffs.len() {
            return Err(Error::CountMismatch(format!(
                "{} frames with {} coefficients",
                frames.len(),
                coeffs.len()
            )));
        }
        let base = frames[0];
        for f in &frames[1..] {
            if !base.shares_measure_with(f) {
                return Err(Error::MeasureMismatch(
                    "combination over different measures".into(),
                ));
            }
        }
        let ops = (0..base.point_count())
            .map(|j| {
                let mut acc = base.operators[j].scale(coeffs[0]);
                for (f, &c) in frames[1..].iter().zip(&coeffs[1..]) {
                    acc = &acc + &f.operators[j].scale(c);
                }
                acc
            })
            .collect();
        OperatorFrame::new(base.measure.clone(), ops)
    }

    /// Pointwise difference {M_j − N_j} over a shared measure.
    pub fn difference(&self, other: &OperatorFrame) -> Result<OperatorFrame> {
        let one = Complex64::new(1.0, 0.0);
        OperatorFrame::linear_combination(&[self, other], &[one, -one])
    }
}

/// Lower and upper frame bounds. For ordinary frames the optimal pair is
/// ordered; for K-frames the lower bound is measured against ⟨K*x,K*x⟩
/// and may legitimately exceed the upper one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || lower < 0.0 || upper.is_nan() || upper < 0.0 {
            return Err(Error::BadParameter(format!(
                "frame bounds must be nonnegative, got ({lower}, {upper})"
            )));
        }
        Ok(FrameBounds { lower, upper })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameClassification {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub bounds: FrameBounds,
}

/// Fixed adjointable operator K for K-frame bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct KOperator {
    pub op: ModuleOperator,
}

impl KOperator {
    pub fn new(op: ModuleOperator) -> Self {
        KOperator { op }
    }

    pub fn identity(algebra_dim: usize, module_rank: usize) -> Self {
        KOperator {
            op: ModuleOperator::identity(algebra_dim, module_rank),
        }
    }

    /// KᴴK, the Gram of the adjoint action: ⟨K*x,K*x⟩ = X·(KᴴK)·Xᴴ.
    pub fn gram(&self) -> AlgebraElement {
        let m = self.op.matrix();
        AlgebraElement::new(m.adjoint() * m).expect("square by construction")
    }
}

/// Gram matrix G = Σ_j μ_j M_j M_jᴴ, PSD of side n·d.
pub fn frame_gram(frame: &OperatorFrame) -> AlgebraElement {
    let side = frame.side();
    let mut acc = DMatrix::<Complex64>::zeros(side, side);
    for (op, &w) in frame.operators().iter().zip(frame.measure().weights()) {
        let m = op.matrix();
        acc += (m * m.adjoint()).scale(w);
    }
    AlgebraElement::new(acc).expect("square by construction")
}

/// Optimal frame bounds: the extreme eigenvalues of the Gram matrix.
/// These are simultaneously the best Loewner constants and the best norm
/// constants in this model.
pub fn optimal_bounds(frame: &OperatorFrame) -> FrameBounds {
    let eigs = hermitian_eigenvalues(&frame_gram(frame));
    let lower = eigs.first().copied().unwrap_or(0.0).max(0.0);
    let upper = eigs.last().copied().unwrap_or(0.0).max(0.0);
    FrameBounds { lower, upper }
}

/// Bessel/frame/tight/Parseval flags from the optimal bounds. The chain
/// parseval ⇒ tight ⇒ frame ⇒ bessel holds by construction; in
/// particular the zero family is Bessel only.
pub fn classify(frame: &OperatorFrame, tol: &Tolerance) -> FrameClassification {
    let bounds = optimal_bounds(frame);
    let (a, b) = (bounds.lower, bounds.upper);
    let is_frame = a > tol.rel * f64::max(1.0, b);
    let is_tight = is_frame && (b - a) <= tol.rel * b;
    let is_parseval = is_tight && (b - 1.0).abs() <= tol.rel;
    FrameClassification {
        is_bessel: true,
        is_frame,
        is_tight,
        is_parseval,
        bounds,
    }
}

/// The frame operator S: x ↦ x·G. Self-adjoint and positive by
/// construction; invertible exactly when the family is a frame.
pub fn frame_operator(frame: &OperatorFrame) -> ModuleOperator {
    ModuleOperator::new(frame_gram(frame).into_entries(), frame.algebra_dim())
        .expect("gram side matches frame side")
}

/// Analysis map x ↦ {M_j x}. Weights stay with the measure; they enter
/// through `l2_inner` and `synthesis`.
pub fn analysis(frame: &OperatorFrame, x: &ModuleVector) -> Result<L2Family> {
    let members = frame
        .operators()
        .iter()
        .map(|op| op.apply(x))
        .collect::<Result<Vec<_>>>()?;
    L2Family::new(members)
}

/// Synthesis map {f_j} ↦ Σ_j μ_j M_j* f_j, the adjoint of `analysis`.
pub fn synthesis(frame: &OperatorFrame, family: &L2Family) -> Result<ModuleVector> {
    if family.point_count() != frame.point_count() {
        return Err(Error::DimensionMismatch(format!(
            "family of {} members against {} measure points",
            family.point_count(),
            frame.point_count()
        )));
    }
    let mut acc = ModuleVector::zeros(frame.algebra_dim(), frame.module_rank());
    for ((op, fj), &w) in frame
        .operators()
        .iter()
        .zip(family.members())
        .zip(frame.measure().weights())
    {
        let term = op.adjoint().apply(fj)?;
        let scaled = term.entries().scale(w);
        acc = &acc + &ModuleVector::new(scaled, frame.algebra_dim())?;
    }
    Ok(acc)
}

/// Composite synthesis∘analysis. Coincides with `frame_operator`.
pub fn s_k(frame: &OperatorFrame) -> ModuleOperator {
    frame_operator(frame)
}

/// K-frame bounds: upper = λ_max(G); lower = optimal constant A with
/// A·KᴴK ⪯ G, the pencil of G against KᴴK restricted to the retained
/// range of KᴴK. The flag reports whether the family is a K-frame.
pub fn k_frame_bounds(
    frame: &OperatorFrame,
    k: &KOperator,
    tol: &Tolerance,
) -> Result<(FrameBounds, bool)> {
    if k.op.algebra_dim() != frame.algebra_dim() || k.op.module_rank() != frame.module_rank() {
        return Err(Error::DimensionMismatch(format!(
            "K of shape (d={},n={}) against frame (d={},n={})",
            k.op.algebra_dim(),
            k.op.module_rank(),
            frame.algebra_dim(),
            frame.module_rank()
        )));
    }
    let gram = frame_gram(frame);
    let upper = hermitian_eigenvalues(&gram)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let pencil = pencil_inf(&gram, &k.gram(), tol)?;
    let lower = match pencil.value {
        PencilValue::Finite(v) => v,
        PencilValue::Unbounded => unreachable!("pencil_inf has no unbounded case"),
    };
    let bounds = FrameBounds { lower, upper };
    let is_k_frame = lower > tol.rel * f64::max(1.0, upper);
    Ok((bounds, is_k_frame))
}

/// The generic lower K-frame bound A·‖K‖⁻² valid for every frame with
/// lower bound A. Never exceeds the optimal pencil bound.
pub fn remark_bound(frame: &OperatorFrame, k: &KOperator, tol: &Tolerance) -> Result<f64> {
    let class = classify(frame, tol);
    if !class.is_frame {
        return Err(Error::NotAFrame(
            "remark bound needs a frame lower bound".into(),
        ));
    }
    let knorm = k.op.norm();
    if knorm <= tol.abs_floor {
        return Err(Error::ZeroK);
    }
    Ok(class.bounds.lower / (knorm * knorm))
}
