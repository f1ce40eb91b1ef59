//! The punctured line `ℝ∖{0}`: grid functions in `W^{1,2}` with separate
//! traces at `0⁺` and `0⁻`, the boundary functionals, the distributional
//! derivative `iD`, the defect vectors and the boundary phases of the
//! resulting self-adjoint extensions.
//!
//! Each half-line is sampled on `N = T/h` interior nodes plus the stored
//! trace at the origin, so the right half is `ψ(0⁺), ψ(h), …, ψ(T)` and the
//! left half `ψ(-T), …, ψ(-h), ψ(0⁻)`. Functionals read the stored traces
//! directly; integrals use the composite trapezoid rule on each half and
//! derivatives are second order (central inside, one-sided at the four end
//! nodes).

use std::f64::consts::PI;

use crate::linalg::{C64, I, ONE, ZERO};
use crate::slh::ScalarGauge;

/// Defaults for grid construction.
pub const DEFAULT_HALF_WIDTH: f64 = 40.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DECAY_TOL: f64 = 1e-12;
/// Below this half-width `e^{-T}` is too large for the defect vectors to
/// count as vanishing at the cut.
pub const MIN_DEFECT_HALF_WIDTH: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OneParticleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid function does not vanish at the cut: |ψ(±T)| = {0:e}")]
    NotDecayed(f64),
    #[error("grid function has a non-finite value")]
    NonFinite,
    #[error("grid functions live on different grids")]
    SpecMismatch,
    #[error("half-width {0} is too small for the defect vectors (need T ≥ {MIN_DEFECT_HALF_WIDTH})")]
    DomainTooSmall(f64),
    #[error("mollifier integrates to {integral} (|1 - ∫g| = {deviation:e})")]
    InvalidMollifier { integral: f64, deviation: f64 },
    #[error("regularization width must be positive, got {0}")]
    InvalidWidth(f64),
}

pub type Result<T> = std::result::Result<T, OneParticleError>;

/// Uniform grid on `[-T, 0) ∪ (0, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    step: f64,
    nodes: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !half_width.is_finite() || !step.is_finite() {
            return Err(OneParticleError::InvalidGrid(format!(
                "need finite T and h > 0, got T = {half_width}, h = {step}"
            )));
        }
        let ratio = half_width / step;
        let nodes = ratio.round();
        if (ratio - nodes).abs() > 1e-9 * ratio.max(1.0) {
            return Err(OneParticleError::InvalidGrid(format!(
                "T/h = {ratio} is not an integer"
            )));
        }
        if nodes < 10.0 {
            return Err(OneParticleError::InvalidGrid(format!(
                "T/h = {nodes} is below 10"
            )));
        }
        Ok(Self {
            half_width,
            step,
            nodes: nodes as usize,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Interior nodes per half-line (`T/h`).
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Same half-width, half the step.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            step: self.step / 2.0,
            nodes: self.nodes * 2,
        }
    }

    /// `t_k = (k+1)h`, `k = 0..N`.
    pub fn right_node(&self, k: usize) -> f64 {
        (k + 1) as f64 * self.step
    }

    /// `t_k = -T + kh`, `k = 0..N`.
    pub fn left_node(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.step
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(DEFAULT_HALF_WIDTH, DEFAULT_STEP).expect("default grid is valid")
    }
}

/// The pair of traces `(ψ(0⁺), ψ(0⁻))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryTrace {
    pub plus: C64,
    pub minus: C64,
}

impl BoundaryTrace {
    pub fn new(plus: C64, minus: C64) -> Self {
        Self { plus, minus }
    }
}

/// A complex function on the punctured grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    left: Vec<C64>,
    right: Vec<C64>,
    trace: BoundaryTrace,
}

impl GridFunction {
    /// Samples `left(t)` on `[-T, 0]` and `right(t)` on `[0, T]`; the values
    /// at `t = 0` become the traces `ψ(0⁻)` and `ψ(0⁺)`.
    pub fn from_fn(
        spec: GridSpec,
        left: impl Fn(f64) -> C64,
        right: impl Fn(f64) -> C64,
    ) -> Result<Self> {
        let f = Self {
            spec,
            left: (0..spec.nodes).map(|k| left(spec.left_node(k))).collect(),
            right: (0..spec.nodes).map(|k| right(spec.right_node(k))).collect(),
            trace: BoundaryTrace::new(right(0.0), left(0.0)),
        };
        f.validate()?;
        Ok(f)
    }

    /// Builds from raw samples: `left` on `-T..-h`, `right` on `h..T`.
    pub fn from_samples(
        spec: GridSpec,
        left: Vec<C64>,
        right: Vec<C64>,
        trace: BoundaryTrace,
    ) -> Result<Self> {
        if left.len() != spec.nodes || right.len() != spec.nodes {
            return Err(OneParticleError::InvalidGrid(format!(
                "expected {} samples per half, got {} and {}",
                spec.nodes,
                left.len(),
                right.len()
            )));
        }
        let f = Self {
            spec,
            left,
            right,
            trace,
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !(self.left.iter().chain(&self.right).all(finite)
            && finite(&self.trace.plus)
            && finite(&self.trace.minus))
        {
            return Err(OneParticleError::NonFinite);
        }
        let edge = self.left[0].norm().max(self.right[self.spec.nodes - 1].norm());
        if edge > DECAY_TOL {
            return Err(OneParticleError::NotDecayed(edge));
        }
        Ok(())
    }

    pub fn zero(spec: GridSpec) -> Self {
        Self {
            spec,
            left: vec![ZERO; spec.nodes],
            right: vec![ZERO; spec.nodes],
            trace: BoundaryTrace::new(ZERO, ZERO),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn trace(&self) -> BoundaryTrace {
        self.trace
    }

    pub fn at_plus(&self) -> C64 {
        self.trace.plus
    }

    pub fn at_minus(&self) -> C64 {
        self.trace.minus
    }

    /// Samples on `[0, T]`, trace first.
    pub fn right_half(&self) -> Vec<C64> {
        std::iter::once(self.trace.plus)
            .chain(self.right.iter().copied())
            .collect()
    }

    /// Samples on `[-T, 0]`, trace last.
    pub fn left_half(&self) -> Vec<C64> {
        self.left
            .iter()
            .copied()
            .chain(std::iter::once(self.trace.minus))
            .collect()
    }

    fn from_halves(spec: GridSpec, left_half: Vec<C64>, right_half: Vec<C64>) -> Self {
        let n = spec.nodes;
        Self {
            spec,
            trace: BoundaryTrace::new(right_half[0], left_half[n]),
            left: left_half[..n].to_vec(),
            right: right_half[1..].to_vec(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.spec != other.spec {
            return Err(OneParticleError::SpecMismatch);
        }
        let zip = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
        Ok(Self {
            spec: self.spec,
            left: zip(&self.left, &other.left),
            right: zip(&self.right, &other.right),
            trace: BoundaryTrace::new(
                f(self.trace.plus, other.trace.plus),
                f(self.trace.minus, other.trace.minus),
            ),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            spec: self.spec,
            left: self.left.iter().map(|&x| x * z).collect(),
            right: self.right.iter().map(|&x| x * z).collect(),
            trace: BoundaryTrace::new(self.trace.plus * z, self.trace.minus * z),
        }
    }

    /// Second-order finite-difference derivative on each half; the traces of
    /// the result are the one-sided derivatives at `0±`.
    pub fn derivative(&self) -> Self {
        let h = self.spec.step;
        Self::from_halves(
            self.spec,
            differentiate(&self.left_half(), h),
            differentiate(&self.right_half(), h),
        )
    }

    /// Largest sample modulus, traces included.
    pub fn max_abs(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .chain([&self.trace.plus, &self.trace.minus])
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn differentiate(f: &[C64], h: f64) -> Vec<C64> {
    let n = f.len();
    debug_assert!(n >= 3);
    let inv2h = 1.0 / (2.0 * h);
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h);
    for k in 1..n - 1 {
        d.push((f[k + 1] - f[k - 1]) * inv2h);
    }
    d.push((3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h);
    d
}

fn trapezoid(a: &[C64], b: &[C64], h: f64) -> C64 {
    let n = a.len();
    let interior: C64 = (1..n - 1).map(|k| a[k].conj() * b[k]).sum();
    let ends = 0.5 * (a[0].conj() * b[0] + a[n - 1].conj() * b[n - 1]);
    (interior + ends) * h
}

/// `∫ φ* ψ` over both halves.
pub fn l2_inner(phi: &GridFunction, psi: &GridFunction) -> Result<C64> {
    if phi.spec != psi.spec {
        return Err(OneParticleError::SpecMismatch);
    }
    let h = phi.spec.step;
    Ok(trapezoid(&phi.left_half(), &psi.left_half(), h)
        + trapezoid(&phi.right_half(), &psi.right_half(), h))
}

/// `⟨φ|ψ⟩₁,₂ = ∫ (φ*ψ + ∂φ*∂ψ)` over `ℝ∖{0}`.
pub fn sobolev_inner(phi: &GridFunction, psi: &GridFunction) -> Result<C64> {
    Ok(l2_inner(phi, psi)? + l2_inner(&phi.derivative(), &psi.derivative())?)
}

pub fn sobolev_norm(psi: &GridFunction) -> f64 {
    sobolev_inner(psi, psi)
        .expect("same grid")
        .re
        .max(0.0)
        .sqrt()
}

/// Linear functionals acting on the traces at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    DeltaPlus,
    DeltaMinus,
    /// `ȷ = δ₊ - δ₋`
    Jump,
    /// `δ⋆ = ½(δ₊ + δ₋)`
    DeltaStar,
    /// `|ζ⟩ = κ₊|δ₊⟩ + κ₋|δ₋⟩`
    Zeta(ScalarGauge),
}

impl Functional {
    /// `⟨ξ|ψ⟩` evaluated on a trace. For `ζ` this is the adjoint functional
    /// `κ₋ψ(0⁺) + κ₊ψ(0⁻)`.
    pub fn eval_trace(&self, t: BoundaryTrace) -> C64 {
        match self {
            Functional::DeltaPlus => t.plus,
            Functional::DeltaMinus => t.minus,
            Functional::Jump => t.plus - t.minus,
            Functional::DeltaStar => 0.5 * (t.plus + t.minus),
            Functional::Zeta(g) => g.kappa_minus() * t.plus + g.kappa_plus() * t.minus,
        }
    }

    pub fn eval(&self, psi: &GridFunction) -> C64 {
        self.eval_trace(psi.trace())
    }

    /// `⟨φ|ξ⟩ = ⟨ξ|φ⟩*`.
    pub fn pair_from_left(&self, phi: &GridFunction) -> C64 {
        self.eval(phi).conj()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryFunctionals {
    pub delta_plus: C64,
    pub delta_minus: C64,
    pub jump: C64,
    pub delta_star: C64,
    pub zeta: Option<C64>,
}

pub fn boundary_functionals(psi: &GridFunction, gauge: Option<ScalarGauge>) -> BoundaryFunctionals {
    let t = psi.trace();
    BoundaryFunctionals {
        delta_plus: Functional::DeltaPlus.eval_trace(t),
        delta_minus: Functional::DeltaMinus.eval_trace(t),
        jump: Functional::Jump.eval_trace(t),
        delta_star: Functional::DeltaStar.eval_trace(t),
        zeta: gauge.map(|g| Functional::Zeta(g).eval_trace(t)),
    }
}

/// `⟨φ|𝒥ψ⟩ = φ*(0⁺)ψ(0⁺) - φ*(0⁻)ψ(0⁻)` for `𝒥 = |δ₊⟩⟨δ₊| - |δ₋⟩⟨δ₋|`.
pub fn jump_form(phi: BoundaryTrace, psi: BoundaryTrace) -> C64 {
    phi.plus.conj() * psi.plus - phi.minus.conj() * psi.minus
}

/// `⟨φ|(|ȷ⟩⟨ξ| + |ξ⟩⟨ȷ|)ψ⟩` with `ξ = δ⋆` (no gauge) or `ξ = ζ`.
pub fn symmetrized_jump_form(
    phi: BoundaryTrace,
    psi: BoundaryTrace,
    gauge: Option<ScalarGauge>,
) -> C64 {
    let xi = gauge.map_or(Functional::DeltaStar, Functional::Zeta);
    let j = Functional::Jump;
    j.eval_trace(phi).conj() * xi.eval_trace(psi) + xi.eval_trace(phi).conj() * j.eval_trace(psi)
}

/// A regular function plus a multiple of a singular functional, the shape
/// of `iDψ` for a discontinuous `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSum {
    pub regular: GridFunction,
    pub coefficient: C64,
    pub functional: Functional,
}

impl SingularSum {
    /// `⟨φ|self⟩ = ⟨φ|regular⟩ + c·⟨φ|ξ⟩`.
    pub fn pair(&self, phi: &GridFunction) -> Result<C64> {
        Ok(l2_inner(phi, &self.regular)? + self.coefficient * self.functional.pair_from_left(phi))
    }
}

/// `iDψ = i∂ψ + i⟨ȷ|ψ⟩|δ⋆⟩`, or with a gauge `iD_σψ = i∂ψ + i⟨ȷ|ψ⟩|ζ⟩`.
pub fn apply_id(psi: &GridFunction, sigma: Option<f64>) -> SingularSum {
    SingularSum {
        regular: psi.derivative().scale(I),
        coefficient: I * Functional::Jump.eval(psi),
        functional: sigma.map_or(Functional::DeltaStar, |s| {
            Functional::Zeta(ScalarGauge::new(s))
        }),
    }
}

/// `⟨φ|iDψ⟩ - ⟨iDφ|ψ⟩`, which vanishes for a symmetric `iD` up to the
/// discretization error.
pub fn symmetry_defect(phi: &GridFunction, psi: &GridFunction, sigma: Option<f64>) -> Result<C64> {
    let lhs = apply_id(psi, sigma).pair(phi)?;
    let rhs = apply_id(phi, sigma).pair(psi)?.conj();
    Ok(lhs - rhs)
}

/// Boundary form of the adjoint `k₀† = i∂` (regular part only):
/// `⟨φ|i∂ψ⟩ - ⟨i∂φ|ψ⟩`, which should equal `-i⟨φ|𝒥ψ⟩`.
pub fn boundary_form(phi: &GridFunction, psi: &GridFunction) -> Result<C64> {
    let dpsi = psi.derivative().scale(I);
    let dphi = phi.derivative().scale(I);
    Ok(l2_inner(phi, &dpsi)? - l2_inner(&dphi, psi)?)
}

fn defect_pair(spec: GridSpec) -> (GridFunction, GridFunction) {
    let zero = |_: f64| ZERO;
    let plus = GridFunction {
        spec,
        left: vec![ZERO; spec.nodes],
        right: (0..spec.nodes)
            .map(|k| -I * (-spec.right_node(k)).exp())
            .collect(),
        trace: BoundaryTrace::new(-I, zero(0.0)),
    };
    let minus = GridFunction {
        spec,
        left: (0..spec.nodes)
            .map(|k| I * spec.left_node(k).exp())
            .collect(),
        right: vec![ZERO; spec.nodes],
        trace: BoundaryTrace::new(ZERO, I),
    };
    (plus, minus)
}

/// Defect vectors `φ₊(t) = -i e^{-t} 1_{t>0}` and `φ₋(t) = i e^{t} 1_{t<0}`,
/// spanning `ker(k̃₀† ± i)`: `∂φ± = ∓φ±`, `⟨ȷ|φ±⟩ = -i`, `‖φ±‖₁,₂ = 1`.
pub fn defect_vectors(spec: GridSpec) -> Result<(GridFunction, GridFunction)> {
    if spec.half_width < MIN_DEFECT_HALF_WIDTH {
        return Err(OneParticleError::DomainTooSmall(spec.half_width));
    }
    Ok(defect_pair(spec))
}

/// `ψ = ψ₀ + c₊φ₊ + c₋φ₋` with `ψ₀(0±) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevDecomposition {
    pub psi0: GridFunction,
    pub c_plus: C64,
    pub c_minus: C64,
}

impl SobolevDecomposition {
    pub fn reconstruct(&self) -> GridFunction {
        let (plus, minus) = defect_pair(*self.psi0.spec());
        self.psi0
            .add(&plus.scale(self.c_plus))
            .and_then(|f| f.add(&minus.scale(self.c_minus)))
            .expect("same grid")
    }
}

pub fn decompose_sobolev(psi: &GridFunction) -> SobolevDecomposition {
    let (plus, minus) = defect_pair(*psi.spec());
    let c_plus = I * psi.at_plus();
    let c_minus = -I * psi.at_minus();
    let mut psi0 = psi
        .sub(&plus.scale(c_plus))
        .and_then(|f| f.sub(&minus.scale(c_minus)))
        .expect("same grid");
    // Exact by construction; pin the rounding residue of c·φ(0±).
    psi0.trace = BoundaryTrace::new(ZERO, ZERO);
    SobolevDecomposition {
        psi0,
        c_plus,
        c_minus,
    }
}

/// Boundary phases for a point interaction of strength `E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPhase {
    /// Symmetric extension, `(1 - iE/2)/(1 + iE/2)`.
    pub s: C64,
    /// Gauged extension, `(1 - iκ₋E)/(1 + iκ₊E)`; equals `s` without gauge.
    pub s_sigma: C64,
    /// Phase of the regularized-potential limit, `e^{-iE}`.
    pub s_chebotarev: C64,
}

pub fn boundary_phase(e: f64, sigma: Option<f64>) -> BoundaryPhase {
    let s = C64::new(1.0, -0.5 * e) / C64::new(1.0, 0.5 * e);
    let s_sigma = match sigma {
        None => s,
        Some(sigma) => {
            // 1 ∓ iκ∓E = (1 - σE) ∓ iE/2
            let re = 1.0 - sigma * e;
            C64::new(re, -0.5 * e) / C64::new(re, 0.5 * e)
        }
    };
    BoundaryPhase {
        s,
        s_sigma,
        s_chebotarev: C64::from_polar(1.0, -e),
    }
}

/// Singular part `i⟨ȷ|ψ⟩ + E⟨ξ|ψ⟩` of `k = iD + E|ξ⟩⟨ξ|` on `ψ`, with
/// `ξ = δ⋆` or `ξ = ζ`; zero exactly on the extension's domain.
pub fn extension_singular_part(trace: BoundaryTrace, e: f64, sigma: Option<f64>) -> C64 {
    let xi = sigma.map_or(Functional::DeltaStar, |s| Functional::Zeta(ScalarGauge::new(s)));
    I * Functional::Jump.eval_trace(trace) + e * xi.eval_trace(trace)
}

/// Trace obeying `ψ(0⁻) = s·ψ(0⁺)` for the given coupling.
pub fn extension_trace(plus: C64, e: f64, sigma: Option<f64>) -> BoundaryTrace {
    let phase = boundary_phase(e, sigma);
    BoundaryTrace::new(plus, phase.s_sigma * plus)
}

/// Smooth approximations `g_ε` to the delta function, supported on
/// `[-ε, ε]`.
#[derive(Clone, Copy, Debug)]
pub enum Mollifier {
    /// `c·exp(-1/(1 - (x/ε)²))`, normalized by 64-node Gauss-Legendre.
    Bump,
    /// `(1 + cos(πx/ε))/(2ε)`.
    RaisedCosine,
    /// A caller-provided `g(x, ε)`, used as is.
    Custom(fn(f64, f64) -> f64),
}

impl Default for Mollifier {
    fn default() -> Self {
        Mollifier::Bump
    }
}

fn bump_profile(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

impl Mollifier {
    /// The density as a closure on `ℝ`.
    pub fn density(&self, eps: f64) -> Box<dyn Fn(f64) -> f64> {
        match *self {
            Mollifier::Bump => {
                let (x, w) = gauss_legendre(64);
                let mass: f64 = x.iter().zip(&w).map(|(&x, &w)| w * bump_profile(x)).sum::<f64>()
                    * eps;
                Box::new(move |t| bump_profile(t / eps) / mass)
            }
            Mollifier::RaisedCosine => Box::new(move |t| {
                if t.abs() >= eps {
                    0.0
                } else {
                    (1.0 + (PI * t / eps).cos()) / (2.0 * eps)
                }
            }),
            Mollifier::Custom(g) => Box::new(move |t| if t.abs() > eps { 0.0 } else { g(t, eps) }),
        }
    }
}

/// Transmission through the regularized potential `E g_ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterReport {
    pub energy: f64,
    pub eps: f64,
    /// `∫g_ε` as seen by the transport integrator.
    pub integral: f64,
    /// `ψ_out / ψ_in` along one characteristic.
    pub phase: C64,
    pub chebotarev: C64,
    pub cayley: C64,
    /// `|phase - e^{-iE}|`
    pub phase_error: f64,
    /// `|e^{-iE} - s(E)|`
    pub contrast: f64,
}

/// Steps of the characteristic integrator across `[-ε, ε]`.
pub const TRANSPORT_STEPS: usize = 4000;
pub const MOLLIFIER_MASS_TOL: f64 = 1e-8;

/// Solves `i∂_tψ = (i∂_x + E g_ε(x))ψ` along a characteristic crossing the
/// support of `g_ε`.
///
/// On `x(s) = ε - s` the equation reduces to `dψ/ds = -iE g_ε(x(s)) ψ`,
/// integrated here with classical RK4. The mass `∫g_ε` is accumulated by the
/// same stepper and must be within [`MOLLIFIER_MASS_TOL`] of one.
pub fn scatter_regularized(e: f64, eps: f64, mollifier: Mollifier) -> Result<ScatterReport> {
    if !(eps > 0.0) {
        return Err(OneParticleError::InvalidWidth(eps));
    }
    let g = mollifier.density(eps);
    let ds = 2.0 * eps / TRANSPORT_STEPS as f64;
    let mut psi = ONE;
    let mut mass = 0.0;
    for k in 0..TRANSPORT_STEPS {
        let x0 = eps - k as f64 * ds;
        let (g0, g1, g2) = (g(x0), g(x0 - 0.5 * ds), g(x0 - ds));
        let rhs = |gx: f64, y: C64| -I * e * gx * y;
        let k1 = rhs(g0, psi);
        let k2 = rhs(g1, psi + 0.5 * ds * k1);
        let k3 = rhs(g1, psi + 0.5 * ds * k2);
        let k4 = rhs(g2, psi + ds * k3);
        psi += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        mass += ds / 6.0 * (g0 + 4.0 * g1 + g2);
    }
    let deviation = (mass - 1.0).abs();
    if !(deviation <= MOLLIFIER_MASS_TOL) {
        return Err(OneParticleError::InvalidMollifier {
            integral: mass,
            deviation,
        });
    }
    let phases = boundary_phase(e, None);
    Ok(ScatterReport {
        energy: e,
        eps,
        integral: mass,
        phase: psi,
        chebotarev: phases.s_chebotarev,
        cayley: phases.s,
        phase_error: (psi - phases.s_chebotarev).norm(),
        contrast: (phases.s_chebotarev - phases.s).norm(),
    })
}
