use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::density::DensityOperator;
use crate::error::{Error, Result};
use crate::numerics::{inv_sqrt_psd, tensor_product, CMatrix, C64};

/// Tolerance on `Σ_j E_j†E_j = I`.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-9;
/// Largest qubit count accepted by [`depolarizing_local`].
pub const MAX_LOCAL_QUBITS: usize = 6;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus_ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = kraus_ops.first() else {
            return Err(Error::InvalidArgument("channel needs at least one Kraus operator".into()));
        };
        let (dim_out, dim_in) = (first.nrows(), first.ncols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidArgument("Kraus operators must be non-empty".into()));
        }
        for (j, k) in kraus_ops.iter().enumerate() {
            if k.nrows() != dim_out || k.ncols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {j} is {}x{}, expected {dim_out}x{dim_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if !k.is_finite() {
                return Err(Error::InvalidArgument(format!("Kraus operator {j} has non-finite entries")));
            }
        }
        let channel = KrausChannel { dim_in, dim_out, kraus_ops };
        let dev = channel.trace_preservation_error();
        if dev > TRACE_PRESERVATION_TOL {
            return Err(Error::InvalidChannel(dev));
        }
        Ok(channel)
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel { dim_in: d, dim_out: d, kraus_ops: vec![CMatrix::identity(d)] }
    }

    /// `max |Σ_j E_j†E_j − I|` entrywise.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus_ops {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc.max_abs_diff(&CMatrix::identity(self.dim_in))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus_ops
    }

    /// `ℰ(ρ) = Σ_j E_j ρ E_j†`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} vs state dim {}",
                self.dim_in,
                rho.dim()
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus_ops {
            out = &out + &(&(k * rho.matrix()) * &k.adjoint());
        }
        DensityOperator::new(out)
    }

    /// Channel `ρ ↦ (A ⊗ B)(ρ)` with Kraus set `{E_i ⊗ F_j}`.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let kraus_ops =
            self.kraus_ops.iter().flat_map(|a| other.kraus_ops.iter().map(move |b| tensor_product(a, b))).collect();
        KrausChannel { dim_in: self.dim_in * other.dim_in, dim_out: self.dim_out * other.dim_out, kraus_ops }
    }
}

/// `apply_channel` as a free function.
pub fn apply_channel(c: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    c.apply(rho)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Global depolarizing channel `ρ ↦ (p/d) I + (1 − p) ρ`.
///
/// Kraus set `{√(1−p) I} ∪ {√(p/d) |i⟩⟨j|}`; zero-weight operators are dropped.
pub fn depolarizing_global(p: f64, d: usize) -> Result<KrausChannel> {
    check_probability(p)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("depolarizing channel needs d >= 2, got {d}")));
    }
    let mut ops = Vec::with_capacity(d * d + 1);
    if p < 1.0 {
        ops.push(CMatrix::identity(d).scale((1.0 - p).sqrt()));
    }
    if p > 0.0 {
        let w = (p / d as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                let mut m = CMatrix::zeros(d, d).into_dmatrix();
                m[(i, j)] = C64::new(w, 0.0);
                ops.push(CMatrix::from_dmatrix(m)?);
            }
        }
    }
    KrausChannel::new(ops)
}

fn pauli_ops() -> [CMatrix; 4] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let m = |e: [C64; 4]| CMatrix::from_row_major(2, 2, &e).expect("finite");
    [m([one, z, z, one]), m([z, one, one, z]), m([z, -i, i, z]), m([one, z, z, -one])]
}

/// `k`-fold tensor power of the single-qubit depolarizing channel.
///
/// Single-qubit Kraus set `{√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`.
pub fn depolarizing_local(p: f64, k: usize) -> Result<KrausChannel> {
    check_probability(p)?;
    if k == 0 {
        return Err(Error::InvalidArgument("local depolarizing channel needs k >= 1".into()));
    }
    if k > MAX_LOCAL_QUBITS {
        return Err(Error::DimensionOverflow(k));
    }
    let [id, x, y, z] = pauli_ops();
    let mut single = vec![id.scale((1.0 - 0.75 * p).sqrt())];
    if p > 0.0 {
        let w = (0.25 * p).sqrt();
        single.extend([x.scale(w), y.scale(w), z.scale(w)]);
    }
    let qubit = KrausChannel::new(single)?;
    let mut channel = qubit.clone();
    for _ in 1..k {
        channel = channel.tensor(&qubit);
    }
    Ok(channel)
}

/// Random CPTP map from `n_ops` complex-Gaussian operators `A_j`,
/// normalized as `E_j = A_j (Σ A_i†A_i)^{-1/2}`.
pub fn random_channel(dim_in: usize, dim_out: usize, n_ops: usize, seed: u64) -> Result<KrausChannel> {
    if dim_in == 0 || dim_out == 0 || n_ops == 0 {
        return Err(Error::InvalidArgument("random channel needs positive dimensions and operator count".into()));
    }
    if n_ops * dim_out < dim_in {
        return Err(Error::InvalidArgument(format!(
            "{n_ops} Kraus operators of size {dim_out}x{dim_in} cannot be trace preserving"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<CMatrix> = (0..n_ops)
        .map(|_| {
            let entries: Vec<C64> = (0..dim_in * dim_out)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re, im)
                })
                .collect();
            CMatrix::from_row_major(dim_out, dim_in, &entries).expect("finite draw")
        })
        .collect();
    let mut s = CMatrix::zeros(dim_in, dim_in);
    for a in &raw {
        s = &s + &(&a.adjoint() * a);
    }
    let r = inv_sqrt_psd(&s, 0.0)?;
    KrausChannel::new(raw.iter().map(|a| a * &r).collect())
}
