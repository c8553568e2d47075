//! Per-parameter evaluation context shared by the asymptotic evaluators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::Result;
use crate::lg_coeffs::{default_tables, NumericTables};
use crate::mapping::{MapPoint, Mapping, StokesBranch, StokesPolyline};
use crate::params::ProblemParams;

type C = Complex64;

/// Coefficient values sampled on the Cauchy circle around `z1`.
#[derive(Debug, Clone)]
pub(crate) struct CircleSamples {
    pub nodes: Vec<C>,
    /// `A_s(t)` for `s = 1..` at each node.
    pub a: Vec<Vec<C>>,
    /// `B_s(t)` for `s = 0..` at each node.
    pub b: Vec<Vec<C>>,
}

/// Parameters, the branch geometry and the numeric coefficient tables for
/// one `(n, a)`. Construction traces the branch cut; the Stokes lines and
/// the Cauchy circle samples are computed lazily and cached.
#[derive(Debug)]
pub struct Problem {
    pub params: ProblemParams,
    pub mapping: Mapping,
    pub tables: NumericTables,
    stokes: [OnceLock<Result<StokesPolyline>>; 3],
    pub(crate) circles: Mutex<HashMap<(usize, u64, usize), Arc<CircleSamples>>>,
}

impl Problem {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        let mapping = Mapping::new(params)?;
        let tables = NumericTables::new(default_tables(), params.alpha);
        Ok(Self {
            params: params.clone(),
            mapping,
            tables,
            stokes: Default::default(),
            circles: Mutex::new(HashMap::new()),
        })
    }

    pub fn z1(&self) -> C {
        self.mapping.z1
    }

    /// Mapping quantities at `z`.
    pub fn point(&self, z: C) -> Result<MapPoint> {
        self.mapping.point(z)
    }

    /// `E_1..E_S` at an upper half-plane map point (index 0 holds zero).
    pub fn e_values(&self, pt: &MapPoint) -> Vec<C> {
        let (p, q) = self.exp_phi(pt.z, pt.big_z);
        self.tables.e_values(p, q)
    }

    /// `F_1..F_S` at `z` with a given value of `Z` (index 0 holds zero).
    pub fn f_values_with(&self, z: C, big_z: C) -> Vec<C> {
        let (p, q) = self.exp_phi(z, big_z);
        self.tables.f_values(p, q)
    }

    /// `(e^{i phi}, e^{-i phi}) = ((z - z2)/Z, (z - z1)/Z)`.
    pub fn exp_phi(&self, z: C, big_z: C) -> (C, C) {
        let z1 = self.z1();
        ((z - z1.conj()) / big_z, (z - z1) / big_z)
    }

    /// The traced Stokes line of a branch (cached).
    pub fn stokes(&self, branch: StokesBranch) -> Result<&StokesPolyline> {
        let idx = match branch {
            StokesBranch::AD => 0,
            StokesBranch::AH => 1,
            StokesBranch::AF => 2,
        };
        self.stokes[idx]
            .get_or_init(|| self.mapping.trace_stokes(branch))
            .as_ref()
            .map_err(Clone::clone)
    }
}
