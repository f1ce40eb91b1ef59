//! Truncated boundary-mode Fock space and the two formulations of the
//! boundary condition.
//!
//! Each channel `j` contributes two modes, `a_{j,+}` and `a_{j,-}`, the
//! annihilators at `0⁺` and `0⁻`. The state space is `h ⊗ F` with
//! `F = (ℂ^d)^{⊗2n}`. Basis index ordering is system slowest, then
//! `a_{1,+}, …, a_{n,+}, a_{1,-}, …, a_{n,-}` (the last mode varies
//! fastest), each mode listed from `|0⟩` to `|d-1⟩`.
//!
//! Operators that contain creators are only faithful on states where every
//! mode holds at most `d - 2` photons. The checks here project their
//! *output* onto that guarded subspace. Creators never lower an occupation,
//! so `P a† (1 - P) = 0` and every identity below holds exactly after the
//! projection.

use rand::Rng;

use crate::linalg::{
    self, principal_angles, BlockOperatorMatrix, ComplexMatrix, LinalgError, SubspaceBasis, C64,
    I, NULL_SPACE_TOL, ONE, ZERO,
};
use crate::random;
use crate::slh::{self, CouplingMatrix, Gauge, GaugeMatrix, SlhError, SlhResult};

/// Largest `m·d^{2n}` accepted by [`TruncatedFockSpace::new`].
pub const MAX_FOCK_DIM: usize = 100_000;
/// Largest total dimension for which operators are materialized densely.
pub const MAX_DENSE_DIM: usize = 4096;
/// Default relative tolerance for the singular-action identity.
pub const ACTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FockError {
    #[error("truncated space of dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("photon cutoff must be at least 3, got {0}")]
    CutoffTooSmall(usize),
    #[error("system and channel counts must be positive (m = {m}, n = {n})")]
    EmptyModel { m: usize, n: usize },
    #[error("coupling is for (m, n) = {coupling:?} but the Fock space is {space:?}")]
    ModelMismatch {
        coupling: (usize, usize),
        space: (usize, usize),
    },
    #[error("vector has length {got}, expected {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error("vector violates the boundary condition: residual {residual:e} > {tol:e}")]
    NotInDomain { residual: f64, tol: f64 },
    #[error(transparent)]
    Slh(#[from] SlhError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, FockError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

/// A boundary mode: channel `j` (zero-based) at `0⁺` or `0⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub channel: usize,
    pub side: Side,
}

impl Mode {
    pub fn plus(channel: usize) -> Self {
        Self {
            channel,
            side: Side::Plus,
        }
    }

    pub fn minus(channel: usize) -> Self {
        Self {
            channel,
            side: Side::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFockSpace {
    m: usize,
    n: usize,
    d: usize,
    fock_dim: usize,
}

impl TruncatedFockSpace {
    pub fn new(m: usize, n: usize, d: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(FockError::EmptyModel { m, n });
        }
        if d < 3 {
            return Err(FockError::CutoffTooSmall(d));
        }
        let too_large = FockError::TooLarge {
            dim: usize::MAX,
            limit: MAX_FOCK_DIM,
        };
        let fock_dim = u32::try_from(2 * n)
            .ok()
            .and_then(|e| d.checked_pow(e))
            .ok_or(too_large.clone())?;
        let dim = fock_dim.checked_mul(m).ok_or(too_large)?;
        if dim > MAX_FOCK_DIM {
            return Err(FockError::TooLarge {
                dim,
                limit: MAX_FOCK_DIM,
            });
        }
        Ok(Self { m, n, d, fock_dim })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.d
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        self.m * self.fock_dim
    }

    pub fn mode_count(&self) -> usize {
        2 * self.n
    }

    /// Position of a mode in the ordering `a_{1,+}, …, a_{n,-}`.
    pub fn mode_position(&self, mode: Mode) -> usize {
        assert!(mode.channel < self.n, "channel {} out of range", mode.channel);
        match mode.side {
            Side::Plus => mode.channel,
            Side::Minus => self.n + mode.channel,
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.n)
            .map(Mode::plus)
            .chain((0..self.n).map(Mode::minus))
    }

    fn stride(&self, position: usize) -> usize {
        self.d.pow((self.mode_count() - 1 - position) as u32)
    }

    /// Photon number of `mode` in basis state `index`.
    pub fn occupation(&self, index: usize, mode: Mode) -> usize {
        let p = self.mode_position(mode);
        (index % self.fock_dim) / self.stride(p) % self.d
    }

    /// `(system index, occupations in mode order)`.
    pub fn label(&self, index: usize) -> (usize, Vec<usize>) {
        let f = index % self.fock_dim;
        let occ = (0..self.mode_count())
            .map(|p| f / self.stride(p) % self.d)
            .collect();
        (index / self.fock_dim, occ)
    }

    /// Every mode holds at most `d - 2` photons.
    pub fn is_guarded(&self, index: usize) -> bool {
        self.label(index).1.iter().all(|&k| k + 2 <= self.d)
    }

    pub fn guarded_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.is_guarded(i)).collect()
    }

    /// Zeroes the components outside the guarded subspace.
    pub fn project_guarded(&self, v: &[C64]) -> Vec<C64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| if self.is_guarded(i) { x } else { ZERO })
            .collect()
    }

    pub fn guard_projector(&self) -> ComplexMatrix {
        let diag: Vec<C64> = (0..self.dim())
            .map(|i| if self.is_guarded(i) { ONE } else { ZERO })
            .collect();
        ComplexMatrix::diag(&diag)
    }

    /// `X ⊗ a_mode` (or `X ⊗ a_mode†`) for a system operator `X`, built
    /// entrywise from the ladder action.
    pub fn lift_ladder(&self, x: &ComplexMatrix, mode: Mode, creator: bool) -> ComplexMatrix {
        assert_eq!((x.rows(), x.cols()), (self.m, self.m));
        let stride = self.stride(self.mode_position(mode));
        let f_dim = self.fock_dim;
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for f in 0..f_dim {
            let k = f / stride % self.d;
            // annihilator: |k⟩ → √k |k-1⟩; creator: |k⟩ → √(k+1) |k+1⟩
            let (target, amp) = if creator {
                if k + 1 >= self.d {
                    continue;
                }
                (f + stride, ((k + 1) as f64).sqrt())
            } else {
                if k == 0 {
                    continue;
                }
                (f - stride, (k as f64).sqrt())
            };
            for r in 0..self.m {
                for c in 0..self.m {
                    let v = x[(r, c)];
                    if v != ZERO {
                        out[(r * f_dim + target, c * f_dim + f)] = v * amp;
                    }
                }
            }
        }
        out
    }

    /// `X ⊗ 1_F`.
    pub fn lift_system(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((x.rows(), x.cols()), (self.m, self.m));
        x.kron(&ComplexMatrix::identity(self.fock_dim))
    }

    /// Applies `X ⊗ 1_F` without materializing it.
    pub fn apply_system(&self, x: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
        let f_dim = self.fock_dim;
        let mut out = vec![ZERO; self.dim()];
        for r in 0..self.m {
            for c in 0..self.m {
                let a = x[(r, c)];
                if a == ZERO {
                    continue;
                }
                for f in 0..f_dim {
                    out[r * f_dim + f] += a * v[c * f_dim + f];
                }
            }
        }
        out
    }

    /// Product state `|χ⟩ ⊗ |α_1⟩ ⊗ … ⊗ |α_{2n}⟩` of truncated coherent
    /// states `e^{-|α|²/2} Σ_{k<d} α^k/√k! |k⟩`, amplitudes in mode order.
    /// Not renormalized after truncation.
    pub fn coherent_state(&self, system: &[C64], amplitudes: &[C64]) -> Result<Vec<C64>> {
        if system.len() != self.m {
            return Err(FockError::VectorLength {
                got: system.len(),
                expected: self.m,
            });
        }
        if amplitudes.len() != self.mode_count() {
            return Err(FockError::VectorLength {
                got: amplitudes.len(),
                expected: self.mode_count(),
            });
        }
        let factors: Vec<Vec<C64>> = amplitudes
            .iter()
            .map(|&alpha| {
                let mut c = Vec::with_capacity(self.d);
                let mut term = C64::from((-0.5 * alpha.norm_sqr()).exp());
                for k in 0..self.d {
                    if k > 0 {
                        term = term * alpha / (k as f64).sqrt();
                    }
                    c.push(term);
                }
                c
            })
            .collect();
        Ok((0..self.dim())
            .map(|i| {
                let (s, occ) = self.label(i);
                occ.iter()
                    .zip(&factors)
                    .fold(system[s], |acc, (&k, f)| acc * f[k])
            })
            .collect())
    }
}

/// `‖a|α⟩ - α|α⟩‖ = e^{-|α|²/2} |α|^d / √((d-1)!)` for the truncated
/// coherent state; the only error comes from the missing `|d⟩` component.
pub fn coherent_truncation_error(alpha: C64, d: usize) -> f64 {
    let a = alpha.norm();
    let log_fact: f64 = (1..d).map(|k| (k as f64).ln()).sum();
    (-0.5 * a * a + d as f64 * a.ln() - 0.5 * log_fact).exp()
}

/// Mode operators on `h ⊗ F`, materialized as dense matrices.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    space: TruncatedFockSpace,
    gauge: Option<GaugeMatrix>,
    plus: Vec<ComplexMatrix>,
    minus: Vec<ComplexMatrix>,
    star: Vec<ComplexMatrix>,
    /// `𝔞_j = Σ_l (½δ_{jl} - iZ_{jl}) a_{l,+} + (½δ_{jl} + iZ_{jl}) a_{l,-}`,
    /// equal to `star` without a gauge.
    gauged: Vec<ComplexMatrix>,
    identity: ComplexMatrix,
}

pub fn build_mode_operators(
    m: usize,
    n: usize,
    d: usize,
    gauge: Option<&Gauge>,
) -> Result<ModeOperators> {
    let space = TruncatedFockSpace::new(m, n, d)?;
    ModeOperators::new(space, gauge)
}

impl ModeOperators {
    pub fn new(space: TruncatedFockSpace, gauge: Option<&Gauge>) -> Result<Self> {
        if space.dim() > MAX_DENSE_DIM {
            return Err(FockError::TooLarge {
                dim: space.dim(),
                limit: MAX_DENSE_DIM,
            });
        }
        let (m, n) = (space.m, space.n);
        let gauge = gauge.map(|g| g.to_matrix(n * m)).transpose()?;
        let one_m = ComplexMatrix::identity(m);
        let plus: Vec<_> = (0..n)
            .map(|j| space.lift_ladder(&one_m, Mode::plus(j), false))
            .collect();
        let minus: Vec<_> = (0..n)
            .map(|j| space.lift_ladder(&one_m, Mode::minus(j), false))
            .collect();
        let half = C64::new(0.5, 0.0);
        let star: Vec<_> = plus
            .iter()
            .zip(&minus)
            .map(|(p, q)| (p + q).scale(half))
            .collect();
        let gauged = match &gauge {
            None => star.clone(),
            Some(z) => {
                let (p, q) = gauge_weights(z.matrix(), m, n);
                (0..n)
                    .map(|j| {
                        let mut acc = ComplexMatrix::zeros(space.dim(), space.dim());
                        for l in 0..n {
                            let pj = p.block(j * m, l * m, m, m);
                            let qj = q.block(j * m, l * m, m, m);
                            acc = &acc + &space.lift_ladder(&pj, Mode::plus(l), false);
                            acc = &acc + &space.lift_ladder(&qj, Mode::minus(l), false);
                        }
                        acc
                    })
                    .collect()
            }
        };
        Ok(Self {
            identity: ComplexMatrix::identity(space.dim()),
            space,
            gauge,
            plus,
            minus,
            star,
            gauged,
        })
    }

    pub fn space(&self) -> &TruncatedFockSpace {
        &self.space
    }

    pub fn gauge(&self) -> Option<&GaugeMatrix> {
        self.gauge.as_ref()
    }

    pub fn annihilator(&self, mode: Mode) -> &ComplexMatrix {
        match mode.side {
            Side::Plus => &self.plus[mode.channel],
            Side::Minus => &self.minus[mode.channel],
        }
    }

    /// `a_{j,⋆} = ½(a_{j,+} + a_{j,-})`.
    pub fn star(&self, channel: usize) -> &ComplexMatrix {
        &self.star[channel]
    }

    /// Gauged boundary mode `𝔞_j`; equal to [`Self::star`] without a gauge.
    pub fn gauged(&self, channel: usize) -> &ComplexMatrix {
        &self.gauged[channel]
    }

    /// `a_{α,±}` with `α = 0` the system row: `a_{0,±} = 1`.
    pub fn extended(&self, alpha: usize, side: Side) -> &ComplexMatrix {
        if alpha == 0 {
            &self.identity
        } else {
            self.annihilator(Mode {
                channel: alpha - 1,
                side,
            })
        }
    }

    /// `𝔞_α` with `𝔞_0 = 1`.
    pub fn extended_gauged(&self, alpha: usize) -> &ComplexMatrix {
        if alpha == 0 {
            &self.identity
        } else {
            &self.gauged[alpha - 1]
        }
    }

    pub fn number(&self, mode: Mode) -> ComplexMatrix {
        let a = self.annihilator(mode);
        &a.adjoint() * a
    }

    /// `K_{0,sing} = i Σ_j 𝔞_j†(a_{j,+} - a_{j,-})`.
    pub fn k_sing(&self) -> ComplexMatrix {
        let dim = self.space.dim();
        let mut k = ComplexMatrix::zeros(dim, dim);
        for j in 0..self.space.n {
            let diff = &self.plus[j] - &self.minus[j];
            k = &k + &(&self.gauged[j].adjoint() * &diff);
        }
        k.scale(I)
    }

    /// `Υ = Σ_{αβ} 𝔞_α† E_{αβ} 𝔞_β` with `𝔞_0 = 1`.
    pub fn upsilon(&self, e: &CouplingMatrix) -> Result<ComplexMatrix> {
        self.check_model(e)?;
        let dim = self.space.dim();
        let blocks = e.blocks();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for alpha in 0..=self.space.n {
            let left = self.extended_gauged(alpha).adjoint();
            for beta in 0..=self.space.n {
                let eab = self.space.lift_system(&blocks.entry(alpha, beta));
                out = &out + &(&(&left * &eab) * self.extended_gauged(beta));
            }
        }
        Ok(out)
    }

    fn check_model(&self, e: &CouplingMatrix) -> Result<()> {
        if (e.m(), e.n()) != (self.space.m, self.space.n) {
            return Err(FockError::ModelMismatch {
                coupling: (e.m(), e.n()),
                space: (self.space.m, self.space.n),
            });
        }
        Ok(())
    }

    fn slh(&self, e: &CouplingMatrix) -> Result<SlhResult> {
        self.check_model(e)?;
        let gauge = self.gauge.clone().map(Gauge::Matrix);
        Ok(slh::slh_triple(e, gauge.as_ref())?)
    }
}

/// Channel blocks `P = ½ - iZ` and `Q = ½ + iZ`, each `nm × nm`.
fn gauge_weights(z: &ComplexMatrix, m: usize, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let half = ComplexMatrix::identity(n * m).scale(C64::new(0.5, 0.0));
    let iz = z.scale(I);
    (&half - &iz, &half + &iz)
}

/// Which formulation produced a boundary subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `Π{i(a₊ - a₋) + E𝔞}Φ = 0`
    KernelB,
    /// `a_{j,-}Φ = S_{jk}a_{k,+}Φ + L_jΦ`
    KernelC,
}

#[derive(Clone, Debug)]
pub struct BoundarySubspace {
    pub basis: SubspaceBasis,
    pub route: Route,
    pub tol: f64,
}

impl BoundarySubspace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Stacked rows `Σ_l X_{jl} ⊗ a_{l,+} + Y_{jl} ⊗ a_{l,-} + c_j ⊗ 1`,
/// `j = 1..n`, with `X, Y` given as `nm × nm` and `c` as `nm × m`.
fn ladder_rows(
    space: &TruncatedFockSpace,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Vec<ComplexMatrix> {
    let (m, n) = (space.m, space.n);
    (0..n)
        .map(|j| {
            let mut row = space.lift_system(&c.block(j * m, 0, m, m));
            for l in 0..n {
                let xb = x.block(j * m, l * m, m, m);
                let yb = y.block(j * m, l * m, m, m);
                row = &row + &space.lift_ladder(&xb, Mode::plus(l), false);
                row = &row + &space.lift_ladder(&yb, Mode::minus(l), false);
            }
            row
        })
        .collect()
}

/// The operators `B_j = i(a_{j,+} - a_{j,-}) + E_{j0} + Σ_k E_{jk}𝔞_k`.
pub fn b_operators(e: &CouplingMatrix, ops: &ModeOperators) -> Result<Vec<ComplexMatrix>> {
    ops.check_model(e)?;
    let (m, n) = (e.m(), e.n());
    let nm = n * m;
    let ell = e.blocks().xll();
    let (p, q) = match ops.gauge() {
        Some(z) => gauge_weights(z.matrix(), m, n),
        None => {
            let half = ComplexMatrix::identity(nm).scale(C64::new(0.5, 0.0));
            (half.clone(), half)
        }
    };
    let i_one = ComplexMatrix::identity(nm).scale(I);
    let x = &i_one + &(&ell * &p);
    let y = &(&ell * &q) - &i_one;
    Ok(ladder_rows(ops.space(), &x, &y, &e.blocks().xl0()))
}

/// The operators `C_j = a_{j,-} - Σ_k S_{jk}a_{k,+} - L_j`.
pub fn c_operators(e: &CouplingMatrix, ops: &ModeOperators) -> Result<Vec<ComplexMatrix>> {
    let slh = ops.slh(e)?;
    Ok(c_operators_from(&slh, ops))
}

fn c_operators_from(slh: &SlhResult, ops: &ModeOperators) -> Vec<ComplexMatrix> {
    let nm = slh.s.rows();
    let minus_one = C64::new(-1.0, 0.0);
    ladder_rows(
        ops.space(),
        &slh.s.scale(minus_one),
        &ComplexMatrix::identity(nm),
        &slh.l.scale(minus_one),
    )
}

/// Stacks `P·X_j` for the guard projector `P`.
fn guarded_stack(space: &TruncatedFockSpace, rows: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let guard = space.guard_projector();
    let parts: Vec<_> = rows.iter().map(|r| &guard * r).collect();
    Ok(ComplexMatrix::vstack(&parts)?)
}

pub fn boundary_subspace_b(
    e: &CouplingMatrix,
    ops: &ModeOperators,
    tol: f64,
) -> Result<BoundarySubspace> {
    let stacked = guarded_stack(ops.space(), &b_operators(e, ops)?)?;
    Ok(BoundarySubspace {
        basis: linalg::null_space(&stacked, tol),
        route: Route::KernelB,
        tol,
    })
}

pub fn boundary_subspace_c(
    e: &CouplingMatrix,
    ops: &ModeOperators,
    tol: f64,
) -> Result<BoundarySubspace> {
    let stacked = guarded_stack(ops.space(), &c_operators(e, ops)?)?;
    Ok(BoundarySubspace {
        basis: linalg::null_space(&stacked, tol),
        route: Route::KernelC,
        tol,
    })
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `max_j ‖P X_j Φ‖ / ‖Φ‖`.
pub fn condition_residual(space: &TruncatedFockSpace, rows: &[ComplexMatrix], phi: &[C64]) -> f64 {
    let scale = norm(phi).max(f64::MIN_POSITIVE);
    rows.iter()
        .map(|r| norm(&space.project_guarded(&r.mul_vec(phi))) / scale)
        .fold(0.0, f64::max)
}

/// The two sides of the singular-action identity for one `(E, gauge)`:
/// `A = (K_{0,sing} + Υ)Φ` and `iG₀₀Φ + Σ_k iG₀ₖ a_{k,+}Φ`.
#[derive(Clone, Debug)]
pub struct SingularAction {
    space: TruncatedFockSpace,
    b_rows: Vec<ComplexMatrix>,
    k: ComplexMatrix,
    rhs: ComplexMatrix,
}

impl SingularAction {
    pub fn new(e: &CouplingMatrix, ops: &ModeOperators) -> Result<Self> {
        let slh = ops.slh(e)?;
        let space = *ops.space();
        let m = e.m();
        let g = slh.g.full();
        let mut rhs = space.lift_system(&slh.g.x00().scale(I));
        for kch in 0..e.n() {
            let g0k = g.block(0, (kch + 1) * m, m, m).scale(I);
            rhs = &rhs + &space.lift_ladder(&g0k, Mode::plus(kch), false);
        }
        Ok(Self {
            space,
            b_rows: b_operators(e, ops)?,
            k: &ops.k_sing() + &ops.upsilon(e)?,
            rhs,
        })
    }

    /// `K_{0,sing} + Υ` as a matrix.
    pub fn operator(&self) -> &ComplexMatrix {
        &self.k
    }

    /// `‖P(A - iG₀₀Φ - Σ_k iG₀ₖ a_{k,+}Φ)‖ / ‖Φ‖`, failing with
    /// [`FockError::NotInDomain`] unless `Φ` satisfies the guarded `B`-form
    /// boundary condition to `domain_tol`.
    pub fn residual(&self, phi: &[C64], domain_tol: f64) -> Result<f64> {
        if phi.len() != self.space.dim() {
            return Err(FockError::VectorLength {
                got: phi.len(),
                expected: self.space.dim(),
            });
        }
        let residual = condition_residual(&self.space, &self.b_rows, phi);
        if !(residual <= domain_tol) {
            return Err(FockError::NotInDomain {
                residual,
                tol: domain_tol,
            });
        }
        let a = self.k.mul_vec(phi);
        let rhs = self.rhs.mul_vec(phi);
        let diff: Vec<C64> = a.iter().zip(&rhs).map(|(x, y)| x - y).collect();
        Ok(norm(&self.space.project_guarded(&diff)) / norm(phi).max(f64::MIN_POSITIVE))
    }
}

/// One-shot form of [`SingularAction::residual`].
pub fn singular_action_check(
    e: &CouplingMatrix,
    ops: &ModeOperators,
    phi: &[C64],
    domain_tol: f64,
) -> Result<f64> {
    SingularAction::new(e, ops)?.residual(phi, domain_tol)
}

/// `max |K - K† - i Σ_j (N_{j,+} - N_{j,-})|`. The singular part is not
/// symmetric on its own: its anti-Hermitian part is the second
/// quantization of the jump form, which the boundary condition cancels.
pub fn k_sing_skew_residual(ops: &ModeOperators) -> f64 {
    let k = ops.k_sing();
    let mut expected = ComplexMatrix::zeros(k.rows(), k.cols());
    for j in 0..ops.space().n() {
        expected = &expected + &(&ops.number(Mode::plus(j)) - &ops.number(Mode::minus(j)));
    }
    (&k - &k.adjoint()).max_diff(&expected.scale(I))
}

/// `max ‖P([a_p, a_q†] - δ_{pq})P‖` over all mode pairs.
pub fn commutator_defect(ops: &ModeOperators) -> f64 {
    let space = ops.space();
    let guard = space.guard_projector();
    let modes: Vec<Mode> = space.modes().collect();
    let mut worst: f64 = 0.0;
    for &p in &modes {
        for &q in &modes {
            let (a, b) = (ops.annihilator(p), ops.annihilator(q));
            let comm = &(a * &b.adjoint()) - &(&b.adjoint() * a);
            let target = if p == q {
                ComplexMatrix::identity(space.dim())
            } else {
                ComplexMatrix::zeros(space.dim(), space.dim())
            };
            let defect = &guard * &(&(&comm - &target) * &guard);
            worst = worst.max(defect.max_abs());
        }
    }
    worst
}

/// Tolerances for [`fock_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockTolerances {
    /// Relative singular-value cutoff for the kernels.
    pub kernel: f64,
    /// Bound on principal angles between the two kernels.
    pub angle: f64,
    /// Bound on the relative singular-action residual.
    pub action: f64,
}

impl Default for FockTolerances {
    fn default() -> Self {
        Self {
            kernel: NULL_SPACE_TOL,
            angle: 1e-8,
            action: ACTION_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockReport {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub gauged: bool,
    pub dim: usize,
    pub kernel_dim_b: usize,
    pub kernel_dim_c: usize,
    /// Largest principal angle, `π/2` when the dimensions differ.
    pub max_angle: f64,
    /// Worst `C`-residual over the `B`-basis and vice versa.
    pub cross_residual: f64,
    /// Worst singular-action residual over the sampled domain vectors.
    pub action_residual: f64,
    pub vectors: usize,
    pub k_sing_skew: f64,
}

impl FockReport {
    pub fn subspaces_agree(&self, tol: &FockTolerances) -> bool {
        self.kernel_dim_b == self.kernel_dim_c && self.kernel_dim_b > 0 && self.max_angle <= tol.angle
    }

    pub fn action_holds(&self, tol: &FockTolerances) -> bool {
        self.action_residual <= tol.action
    }
}

/// Both kernels, their principal angles, and the singular-action residual
/// on `vectors` random elements of the `B`-kernel.
pub fn fock_check<R: Rng + ?Sized>(
    e: &CouplingMatrix,
    ops: &ModeOperators,
    tol: &FockTolerances,
    vectors: usize,
    rng: &mut R,
) -> Result<FockReport> {
    let space = *ops.space();
    let b_stack = guarded_stack(&space, &b_operators(e, ops)?)?;
    let c_stack = guarded_stack(&space, &c_operators(e, ops)?)?;
    let kb = linalg::null_space(&b_stack, tol.kernel);
    let kc = linalg::null_space(&c_stack, tol.kernel);

    let max_angle = if kb.dim() == kc.dim() && kb.dim() > 0 {
        principal_angles(&kb, &kc)?
            .into_iter()
            .fold(0.0, f64::max)
    } else {
        std::f64::consts::FRAC_PI_2
    };
    // Largest column norm of the stacked rows applied to the other basis;
    // the stacks are sparse, so one product is cheap.
    let cross = |basis: &SubspaceBasis, stack: &ComplexMatrix| {
        let image = stack * basis.matrix();
        (0..image.cols())
            .map(|c| norm(&image.col_vec(c)))
            .fold(0.0, f64::max)
    };
    let cross_residual = cross(&kb, &c_stack).max(cross(&kc, &b_stack));

    let mut action_residual: f64 = 0.0;
    let mut sampled = 0;
    if kb.dim() > 0 && vectors > 0 {
        let action = SingularAction::new(e, ops)?;
        for _ in 0..vectors {
            let coeffs = random::random_vector(rng, kb.dim());
            let phi = kb.combine(&coeffs);
            // The basis is orthonormal to rounding, so the domain residual
            // is tiny; allow the kernel cutoff as slack.
            let r = action.residual(&phi, tol.kernel.max(1e-8))?;
            action_residual = action_residual.max(r);
            sampled += 1;
        }
    }

    Ok(FockReport {
        m: space.m(),
        n: space.n(),
        d: space.cutoff(),
        gauged: ops.gauge().is_some(),
        dim: space.dim(),
        kernel_dim_b: kb.dim(),
        kernel_dim_c: kc.dim(),
        max_angle,
        cross_residual,
        action_residual,
        vectors: sampled,
        k_sing_skew: k_sing_skew_residual(ops),
    })
}

/// [`fock_check`] with the gauge attached to a fresh set of mode
/// operators.
pub fn gauged_fock_check<R: Rng + ?Sized>(
    e: &CouplingMatrix,
    gauge: &Gauge,
    d: usize,
    tol: &FockTolerances,
    vectors: usize,
    rng: &mut R,
) -> Result<FockReport> {
    let ops = build_mode_operators(e.m(), e.n(), d, Some(gauge))?;
    fock_check(e, &ops, tol, vectors, rng)
}

/// Residual of the boundary condition `a_{j,-}Φ = S_{jk}a_{k,+}Φ + L_jΦ`
/// on a coherent state whose `-` amplitudes are `S α₊ + L` for a scalar
/// system (`m = 1`). Only the truncation tail contributes.
pub fn coherent_boundary_residual(
    e: &CouplingMatrix,
    ops: &ModeOperators,
    plus_amplitudes: &[C64],
) -> Result<f64> {
    let slh = ops.slh(e)?;
    let space = ops.space();
    if space.m() != 1 {
        return Err(FockError::ModelMismatch {
            coupling: (e.m(), e.n()),
            space: (1, space.n()),
        });
    }
    let minus = slh
        .s
        .mul_vec(plus_amplitudes)
        .into_iter()
        .enumerate()
        .map(|(j, z)| z + slh.l[(j, 0)])
        .collect::<Vec<_>>();
    let amps: Vec<C64> = plus_amplitudes.iter().copied().chain(minus).collect();
    let phi = space.coherent_state(&[ONE], &amps)?;
    let rows = c_operators_from(&slh, ops);
    let scale = norm(&phi);
    Ok(rows
        .iter()
        .map(|r| norm(&r.mul_vec(&phi)) / scale)
        .fold(0.0, f64::max))
}

/// Block view of the coupling as seen by the Fock checks; exposed for the
/// examples.
pub fn coupling_blocks(e: &CouplingMatrix) -> &BlockOperatorMatrix {
    e.blocks()
}
