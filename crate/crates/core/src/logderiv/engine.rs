//! Degree-by-degree computation of `D_0` with minimal generator witnesses.
//!
//! In every degree `e` two numbers are computed modulo the working prime
//! `P`: the kernel dimension of the Jacobian map (an upper bound for the
//! rational dimension) and the rank of the monomial multiples of the
//! generators found so far (a lower bound, since the multiples are integral
//! and lie in `D_0`). When they agree the degree is settled without any
//! rational arithmetic. Otherwise the kernel and the syzygies among the
//! multiples are computed exactly.

use num_bigint::BigInt;
use num_traits::Zero;

use super::certified::{certified_kernel, lifting_primes, reduce, IntColumns};
use super::modp::{ModEchelon, ModMatrix};
use super::system::{jacobian_columns, multiples, target_dim, to_triple, Triple};
use super::LogDerivError;
use crate::poly::{dim_s, HomogeneousPoly, RationalPoly, Var};
use crate::scalar::PrimeField;

pub(crate) struct Witness {
    pub degree: u32,
    pub modp: Triple<u64>,
    /// Integer coefficients in rational mode.
    pub exact: Option<Triple<BigInt>>,
}

/// Outcome of one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct DegreeStep {
    pub dim: usize,
    /// Number of monomial multiples of earlier generators.
    pub multiples: usize,
    /// Dimension of their span.
    pub span: usize,
    /// New minimal generators, `dim - span`.
    pub new: usize,
}

enum Mode {
    Rational { partials: Triple<BigInt> },
    Modular,
}

pub(crate) struct Engine {
    p: u64,
    d: u32,
    partials: Triple<u64>,
    mode: Mode,
    pub witnesses: Vec<Witness>,
}

fn dense_rows(p: u64, width: usize, vectors: &[Vec<(usize, u64)>]) -> Vec<Vec<u64>> {
    vectors
        .iter()
        .map(|v| {
            let mut row = vec![0u64; width];
            for (i, c) in v {
                row[*i] = (row[*i] + c) % p;
            }
            row
        })
        .collect()
}

impl Engine {
    /// Certified rational engine. `f` is scaled to a primitive integer form.
    pub fn rational(f: &RationalPoly, p: u64) -> Self {
        let f = f.primitive();
        let partials: Triple<BigInt> = Var::ALL.map(|v| {
            f.partial(v).terms().map(|(m, c)| (*m, c.to_integer())).collect::<Vec<_>>()
        });
        let modp = std::array::from_fn(|k| {
            partials[k].iter().map(|(m, c)| (*m, reduce(c, p))).filter(|(_, c)| *c != 0).collect()
        });
        Self { p, d: f.degree(), partials: modp, mode: Mode::Rational { partials }, witnesses: Vec::new() }
    }

    pub fn modular(f: &HomogeneousPoly<PrimeField>) -> Self {
        let p = f.field().modulus();
        let partials = Var::ALL.map(|v| f.partial(v).terms().map(|(m, c)| (*m, *c)).collect::<Vec<_>>());
        Self { p, d: f.degree(), partials, mode: Mode::Modular, witnesses: Vec::new() }
    }

    fn jacobian_mod(&self, e: u32) -> ModMatrix {
        let cols = jacobian_columns(&self.partials, e);
        let mut m = ModMatrix::zeros(self.p, target_dim(e, self.d), cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                m.add_at(*i, j, *c);
            }
        }
        m
    }

    /// `dim D_0_e` modulo the working prime: exact in modular mode, an
    /// upper bound in rational mode.
    pub fn kernel_dim_mod(&self, e: u32) -> usize {
        3 * dim_s(e as i64) - self.jacobian_mod(e).rank()
    }

    fn multiples_mod(&self, e: u32) -> Vec<Vec<(usize, u64)>> {
        self.witnesses.iter().filter(|w| w.degree < e).flat_map(|w| multiples(&w.modp, w.degree, e)).collect()
    }

    fn multiples_exact(&self, e: u32) -> Vec<Vec<(usize, BigInt)>> {
        self.witnesses
            .iter()
            .filter(|w| w.degree < e)
            .flat_map(|w| multiples(w.exact.as_ref().expect("rational witness"), w.degree, e))
            .collect()
    }

    /// Processes degree `e`; degrees must be visited in increasing order.
    pub fn step(&mut self, e: u32) -> Result<DegreeStep, LogDerivError> {
        let width = 3 * dim_s(e as i64);
        let upper = self.kernel_dim_mod(e);
        let mults = self.multiples_mod(e);
        let lower = if mults.is_empty() {
            0
        } else {
            ModMatrix::from_rows(self.p, width, dense_rows(self.p, width, &mults)).rank()
        };
        if upper == lower {
            return Ok(DegreeStep { dim: upper, multiples: mults.len(), span: lower, new: 0 });
        }
        match self.mode {
            Mode::Modular => self.step_modular(e, width, upper, lower, &mults),
            Mode::Rational { .. } => self.step_rational(e, width),
        }
    }

    fn step_modular(
        &mut self,
        e: u32,
        width: usize,
        dim: usize,
        span: usize,
        mults: &[Vec<(usize, u64)>],
    ) -> Result<DegreeStep, LogDerivError> {
        let p = self.p;
        let (_, kernel) = self.jacobian_mod(e).kernel();
        debug_assert_eq!(kernel.len(), dim);
        let mut ech = ModEchelon::new(p);
        for row in dense_rows(p, width, mults) {
            ech.insert(row);
        }
        for v in kernel {
            if ech.insert(v.clone()) {
                self.witnesses.push(Witness { degree: e, modp: to_triple(e, &v, |c| *c == 0), exact: None });
            }
        }
        Ok(DegreeStep { dim, multiples: mults.len(), span, new: dim - span })
    }

    fn step_rational(&mut self, e: u32, width: usize) -> Result<DegreeStep, LogDerivError> {
        let Mode::Rational { partials } = &self.mode else { unreachable!() };
        let jac = IntColumns { nrows: target_dim(e, self.d), cols: jacobian_columns(partials, e) };
        let kernel = certified_kernel(&jac)?;
        let dim = kernel.len();
        let mults = self.multiples_exact(e);
        let syz = if mults.is_empty() {
            0
        } else {
            certified_kernel(&IntColumns { nrows: width, cols: mults.clone() })?.len()
        };
        let span = mults.len() - syz;
        let new = dim.checked_sub(span).ok_or_else(|| {
            LogDerivError::InconsistentResolution(format!("degree {e}: span of multiples exceeds the kernel"))
        })?;
        // Pick kernel vectors completing the multiples to a basis, modulo a
        // prime that preserves both ranks.
        for q in std::iter::once(self.p).chain(lifting_primes()).take(50) {
            let mut ech = ModEchelon::new(q);
            for v in &mults {
                let mut row = vec![0u64; width];
                for (i, c) in v {
                    row[*i] = (row[*i] + reduce(c, q)) % q;
                }
                ech.insert(row);
            }
            if ech.rank() != span {
                continue;
            }
            let mut chosen = Vec::new();
            for v in &kernel {
                if ech.insert(v.iter().map(|c| reduce(c, q)).collect()) {
                    chosen.push(v);
                }
            }
            if ech.rank() != dim || chosen.len() != new {
                continue;
            }
            for v in chosen {
                let exact = to_triple(e, v, |c| c.is_zero());
                let modp = std::array::from_fn(|k| {
                    exact[k].iter().map(|(m, c)| (*m, reduce(c, self.p))).filter(|(_, c)| *c != 0).collect()
                });
                self.witnesses.push(Witness { degree: e, modp, exact: Some(exact) });
            }
            return Ok(DegreeStep { dim, multiples: mults.len(), span, new });
        }
        Err(LogDerivError::LiftFailed(50))
    }
}
