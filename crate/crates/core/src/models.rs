//! Hamiltonian matrices of the (asymmetric) Rabi and Jaynes–Cummings models.
//!
//! Two energy-offset conventions coexist. The Rabi builders use `ω₀ σ₊σ₋`
//! (bare atom energies `0` and `ω₀`); the Jaynes–Cummings builder uses
//! `(ω₀/2) σ_z` (bare energies `∓ω₀/2`). Each [`HamiltonianMatrix`] carries
//! its [`EnergyConvention`] so absolute energies can be aligned with
//! [`EnergyConvention::offset_to`]; differences `E_n − E_1` need no correction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, kron, OperatorMatrix, Pauli, TruncatedSpace};

/// Physical parameters. `omega0`, `g` and `epsilon` are energies in the
/// same unit as `omega` (which is 1 unless stated otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub omega0: f64,
    pub g: f64,
    pub epsilon: f64,
}

impl ModelParams {
    /// Parameters in units of the field frequency (`omega = 1`).
    pub fn new(omega0: f64, g: f64, epsilon: f64) -> Self {
        ModelParams {
            omega: 1.0,
            omega0,
            g,
            epsilon,
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        ModelParams { g, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        ModelParams { epsilon, ..self }
    }

    pub fn with_omega0(self, omega0: f64) -> Self {
        ModelParams { omega0, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool); 4] = [
            ("omega", self.omega, self.omega > 0.0),
            ("omega0", self.omega0, self.omega0 >= 0.0),
            ("g", self.g, self.g >= 0.0),
            // ε → −ε leaves the spectrum unchanged (conjugation by σ_z together
            // with a → −a), so only ε ≥ 0 is exposed.
            ("epsilon", self.epsilon, self.epsilon >= 0.0),
        ];
        for (name, value, ok) in checks {
            if !value.is_finite() || !ok {
                return Err(Error::param(name, format!("out of range: {value}")));
            }
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::new(1.0, 0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Qrm,
    AsymQrm,
    Qjc,
    AsymQjc,
    /// The asymmetric Rabi model after the `σ_y` rotation that diagonalizes
    /// the coupling in the atomic basis.
    AsymQrmPolaron,
}

impl ModelKind {
    pub fn convention(self) -> EnergyConvention {
        match self {
            ModelKind::Qjc | ModelKind::AsymQjc => EnergyConvention::HalfSigmaZ,
            _ => EnergyConvention::SigmaPlusMinus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Qrm => "qrm",
            ModelKind::AsymQrm => "asym-qrm",
            ModelKind::Qjc => "qjc",
            ModelKind::AsymQjc => "asym-qjc",
            ModelKind::AsymQrmPolaron => "asym-qrm-polaron",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyConvention {
    /// Atom term `ω₀ σ₊σ₋`.
    SigmaPlusMinus,
    /// Atom term `(ω₀/2) σ_z`, lower by `ω₀/2`.
    HalfSigmaZ,
}

impl EnergyConvention {
    /// Constant to add to an energy in `self` to express it in `target`.
    pub fn offset_to(self, target: EnergyConvention, omega0: f64) -> f64 {
        use EnergyConvention::*;
        match (self, target) {
            (HalfSigmaZ, SigmaPlusMinus) => omega0 / 2.0,
            (SigmaPlusMinus, HalfSigmaZ) => -omega0 / 2.0,
            _ => 0.0,
        }
    }
}

/// A real symmetric Hamiltonian on a truncated atom ⊗ field space.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub params: ModelParams,
    pub space: TruncatedSpace,
    pub matrix: OperatorMatrix,
    pub kind: ModelKind,
    pub convention: EnergyConvention,
}

impl HamiltonianMatrix {
    fn new(
        params: ModelParams,
        space: TruncatedSpace,
        matrix: OperatorMatrix,
        kind: ModelKind,
    ) -> Self {
        debug_assert!(matrix.is_symmetric());
        HamiltonianMatrix {
            params,
            space,
            matrix,
            kind,
            convention: kind.convention(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Operator building blocks on one truncated space.
struct Ops {
    field_id: OperatorMatrix,
    atom_id: OperatorMatrix,
    number: OperatorMatrix,
    a: OperatorMatrix,
    quad: OperatorMatrix,
}

impl Ops {
    fn new(space: TruncatedSpace) -> Result<Self> {
        let n = space.n_trunc();
        Ok(Ops {
            field_id: OperatorMatrix::identity(space.field_dim()),
            atom_id: OperatorMatrix::identity(2),
            number: fock::number(n)?,
            a: fock::annihilation(n)?,
            quad: fock::quadrature(n)?,
        })
    }

    fn atom(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        kron(&self.field_id, op)
    }
}

/// Accumulates `Σ cᵢ Mᵢ`, skipping zero coefficients so that no rounding
/// enters terms that are absent.
fn combine(terms: &[(f64, &OperatorMatrix)]) -> OperatorMatrix {
    let dim = terms[0].1.dim();
    let mut out = OperatorMatrix::zeros(dim);
    for &(c, m) in terms {
        if c == 0.0 {
            continue;
        }
        out = &out + &m.scale(c);
    }
    out
}

/// `H = ω₀ σ₊σ₋ + ω a†a + [g(a† + a) + ε] σ_x`.
///
/// Tagged [`ModelKind::Qrm`] when `ε = 0`.
pub fn build_asym_qrm(params: ModelParams, space: TruncatedSpace) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let ops = Ops::new(space)?;
    let sx = fock::pauli(Pauli::X);
    let excited = fock::pauli(Pauli::Plus).matmul(&fock::pauli(Pauli::Minus))?;

    let atom_energy = ops.atom(&excited)?;
    let field_energy = kron(&ops.number, &ops.atom_id)?;
    let coupling = kron(&ops.quad, &sx)?;
    let drive = ops.atom(&sx)?;

    let matrix = combine(&[
        (params.omega0, &atom_energy),
        (params.omega, &field_energy),
        (params.g, &coupling),
        (params.epsilon, &drive),
    ]);
    let kind = if params.epsilon == 0.0 {
        ModelKind::Qrm
    } else {
        ModelKind::AsymQrm
    };
    Ok(HamiltonianMatrix::new(params, space, matrix, kind))
}

/// `H = (ω₀/2) σ_z + ω a†a + g(a†σ₋ + aσ₊) + ε σ_x`.
pub fn build_asym_qjc(params: ModelParams, space: TruncatedSpace) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let ops = Ops::new(space)?;
    let sz = fock::pauli(Pauli::Z);
    let sx = fock::pauli(Pauli::X);

    let atom_energy = ops.atom(&sz)?;
    let field_energy = kron(&ops.number, &ops.atom_id)?;
    let emit = kron(&ops.a.transpose(), &fock::pauli(Pauli::Minus))?;
    let absorb = kron(&ops.a, &fock::pauli(Pauli::Plus))?;
    let exchange = &emit + &absorb;
    let drive = ops.atom(&sx)?;

    let matrix = combine(&[
        (params.omega0 / 2.0, &atom_energy),
        (params.omega, &field_energy),
        (params.g, &exchange),
        (params.epsilon, &drive),
    ]);
    let kind = if params.epsilon == 0.0 {
        ModelKind::Qjc
    } else {
        ModelKind::AsymQjc
    };
    Ok(HamiltonianMatrix::new(params, space, matrix, kind))
}

/// Rotated asymmetric Rabi Hamiltonian
/// `H = ε σ_z + (ω₀/2) σ_x + ω a†a + g(a† + a) σ_z + ω₀/2`,
/// unitarily equivalent to [`build_asym_qrm`].
pub fn build_polaron_frame(
    params: ModelParams,
    space: TruncatedSpace,
) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let ops = Ops::new(space)?;
    let sz = fock::pauli(Pauli::Z);
    let sx = fock::pauli(Pauli::X);

    let bias = ops.atom(&sz)?;
    let tunnel = ops.atom(&sx)?;
    let field_energy = kron(&ops.number, &ops.atom_id)?;
    let coupling = kron(&ops.quad, &sz)?;
    let shift = OperatorMatrix::identity(space.total_dim());

    let matrix = combine(&[
        (params.epsilon, &bias),
        (params.omega0 / 2.0, &tunnel),
        (params.omega, &field_energy),
        (params.g, &coupling),
        (params.omega0 / 2.0, &shift),
    ]);
    Ok(HamiltonianMatrix::new(
        params,
        space,
        matrix,
        ModelKind::AsymQrmPolaron,
    ))
}

/// Displaced-oscillator split `H = H₀ + H₁` of the rotated Hamiltonian.
///
/// `H₀ = Σ_s ĥ_s |s⟩⟨s| + ε₀` with `ĥ_s = p̂²/2 + (ω²/2)(x̂ + x_s)² + sε`,
/// `x̂ = (a + a†)/√(2ω)`, `p̂ = i√(ω/2)(a† − a)` and `x_s = √(2ω) s g/ω²`;
/// `H₁ = (ω₀/2) σ_x` flips the well. Here `s = ±1` is the `σ_z` eigenvalue of
/// the rotated frame.
///
/// The quadratic forms `x̂²` and `p̂²` are evaluated with one extra Fock level
/// and truncated afterwards; forming them from already-truncated ladder
/// matrices would corrupt the last diagonal entry.
pub fn build_h0_h1_split(
    params: ModelParams,
    space: TruncatedSpace,
) -> Result<(HamiltonianMatrix, HamiltonianMatrix)> {
    params.validate()?;
    let ModelParams {
        omega,
        omega0,
        g,
        epsilon,
    } = params;
    let field_dim = space.field_dim();
    let wide = space.n_trunc() + 1;

    let a = fock::annihilation(wide)?;
    let ad = a.transpose();
    let x = (&a + &ad).scale(1.0 / (2.0 * omega).sqrt());
    // p̂² = −(ω/2)(a† − a)², real even though p̂ itself is imaginary.
    let diff = &ad - &a;
    let p2 = diff.matmul(&diff)?.scale(-omega / 2.0);
    let x2 = x.matmul(&x)?;
    let id = OperatorMatrix::identity(wide + 1);

    let well = |s: f64| -> OperatorMatrix {
        let xs = (2.0 * omega).sqrt() * s * g / (omega * omega);
        // (ω²/2)(x̂ + x_s)² = (ω²/2)(x̂² + 2 x_s x̂ + x_s²)
        let shifted = combine(&[(1.0, &x2), (2.0 * xs, &x), (xs * xs, &id)]);
        let h = combine(&[
            (0.5, &p2),
            (omega * omega / 2.0, &shifted),
            (s * epsilon, &id),
        ]);
        h.truncated(field_dim)
    };
    let h_plus = well(1.0);
    let h_minus = well(-1.0);

    let up = OperatorMatrix::from_diagonal(&[0.0, 1.0]);
    let down = OperatorMatrix::from_diagonal(&[1.0, 0.0]);
    let e0 = crate::polaron::polaron_constant(&params);
    let total = OperatorMatrix::identity(space.total_dim());
    let h0 = combine(&[
        (1.0, &kron(&h_plus, &up)?),
        (1.0, &kron(&h_minus, &down)?),
        (e0, &total),
    ]);
    let h1 =
        kron(&OperatorMatrix::identity(field_dim), &fock::pauli(Pauli::X))?.scale(omega0 / 2.0);

    Ok((
        HamiltonianMatrix::new(params, space, symmetrize(h0), ModelKind::AsymQrmPolaron),
        HamiltonianMatrix::new(params, space, h1, ModelKind::AsymQrmPolaron),
    ))
}

/// Products of truncated ladder matrices are symmetric only up to rounding.
fn symmetrize(m: OperatorMatrix) -> OperatorMatrix {
    let t = m.transpose();
    (&m + &t).scale(0.5)
}

/// Dispatches on `kind`. The symmetric models require `epsilon = 0`.
pub fn build(
    kind: ModelKind,
    params: ModelParams,
    space: TruncatedSpace,
) -> Result<HamiltonianMatrix> {
    match kind {
        ModelKind::Qrm | ModelKind::Qjc if params.epsilon != 0.0 => Err(Error::param(
            "epsilon",
            format!("{} requires epsilon = 0", kind.name()),
        )),
        ModelKind::Qrm | ModelKind::AsymQrm => build_asym_qrm(params, space),
        ModelKind::Qjc | ModelKind::AsymQjc => build_asym_qjc(params, space),
        ModelKind::AsymQrmPolaron => build_polaron_frame(params, space),
    }
}

/// Photon-number-plus-atom parity sector `(−1)^(m+s)` of the symmetric Rabi
/// model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// The Rabi model at `ε = 0` restricted to one parity sector is a chain
/// `|0,s₀⟩ – |1,1−s₀⟩ – |2,s₀⟩ – …` and hence tridiagonal. Returns the
/// diagonal and the off-diagonal (`g√(m+1)` between sites `m`, `m+1`).
pub fn qrm_parity_chain(
    params: ModelParams,
    space: TruncatedSpace,
    parity: Parity,
) -> Result<(Vec<f64>, Vec<f64>)> {
    params.validate()?;
    if params.epsilon != 0.0 {
        return Err(Error::param(
            "epsilon",
            "parity sectors exist only at epsilon = 0",
        ));
    }
    let p = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let diag = (0..=space.n_trunc())
        .map(|m| {
            let s = (p + m) % 2;
            params.omega * m as f64 + params.omega0 * s as f64
        })
        .collect();
    let off = (0..space.n_trunc())
        .map(|m| params.g * ((m + 1) as f64).sqrt())
        .collect();
    Ok((diag, off))
}
