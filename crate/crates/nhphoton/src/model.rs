//! Lattice models of lossy photonic baths and the emitters coupled to them.
//!
//! A bath is specified by its coherent (Hermitian) hopping terms plus a set of
//! translation-invariant collective jump operators, all at a common loss rate
//! `kappa`. Restricted to the single-excitation sector, the Lindblad evolution
//! is generated exactly by a non-Hermitian effective Hamiltonian whose photon
//! block is the coherent table minus (i kappa/2) sum_mu L_mu† L_mu. That
//! dissipative part is assembled here as an offset-pair convolution of the
//! jump coefficients, so the real-space table and its Bloch closure
//!
//!   h_k = sum_dr Jt_dr e^{-i k·dr}
//!
//! agree by construction.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Absolute tolerance used when validating Hermiticity of coherent input.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// One coherent hopping term. For every cell `r` it contributes
/// `amp * a†_{r+offset, to} a_{r, from}` to the photonic Hamiltonian.
/// Hermiticity of the total coherent table is validated at build time, so de
/// facto every term comes with its reversed conjugate partner.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingTerm {
    pub offset: Vec<i64>,
    pub from: usize,
    pub to: usize,
    pub amp: C64,
}

/// One term of a translation-invariant jump operator:
/// `L_r += coeff * a_{r+offset, sublattice}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpTerm {
    pub offset: Vec<i64>,
    pub sublattice: usize,
    pub coeff: C64,
}

/// A family of jump operators, one per cell, sharing the global rate `kappa`.
/// Channels with a different physical rate are expressed by scaling the
/// coefficients (D[c L] = |c|^2 D[L]).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JumpOperatorSpec {
    pub terms: Vec<JumpTerm>,
}

/// User-facing lattice description: geometry, coherent hoppings, jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub dimension: usize,
    pub sublattices: usize,
    pub kappa: f64,
    pub hoppings: Vec<HoppingTerm>,
    pub jumps: Vec<JumpOperatorSpec>,
}

/// A two-level emitter at a fixed lattice site. `delta` is the complex
/// detuning (an emitter's own loss folds into Im delta < 0), `g` the coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterSpec {
    pub cell: Vec<i64>,
    pub sublattice: usize,
    pub g: C64,
    pub delta: C64,
}

/// Emitters sorted by cell (lexicographic), then sublattice. The sort fixes
/// the basis ordering used everywhere: self-energy matrix rows/columns,
/// real-space bases and bound-state coefficient vectors all follow it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterSet {
    emitters: Vec<EmitterSpec>,
}

impl EmitterSet {
    pub fn new(mut emitters: Vec<EmitterSpec>) -> Self {
        emitters.sort_by(|a, b| a.cell.cmp(&b.cell).then(a.sublattice.cmp(&b.sublattice)));
        Self { emitters }
    }

    pub fn len(&self) -> usize {
        self.emitters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EmitterSpec> {
        self.emitters.iter()
    }

    pub fn get(&self, i: usize) -> &EmitterSpec {
        &self.emitters[i]
    }

    /// Validate against a lattice: dimensions of cells and sublattice indices.
    pub fn validate(&self, spec: &LatticeSpec) -> Result<()> {
        for (i, e) in self.emitters.iter().enumerate() {
            if e.cell.len() != spec.dimension {
                return Err(Error::BadEmitter {
                    index: i,
                    reason: format!(
                        "cell has {} coordinates, lattice dimension is {}",
                        e.cell.len(),
                        spec.dimension
                    ),
                });
            }
            if e.sublattice >= spec.sublattices {
                return Err(Error::BadEmitter {
                    index: i,
                    reason: format!(
                        "sublattice {} out of range ({} sublattices)",
                        e.sublattice, spec.sublattices
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Boundary condition for finite realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    Open,
}

/// A lattice with its effective (non-Hermitian) hopping table assembled.
///
/// `table[dr]` is the `sublattices x sublattices` matrix of effective
/// amplitudes; entry `(to, from)` multiplies `a†_{r+dr, to} a_{r, from}`.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub spec: LatticeSpec,
    pub table: BTreeMap<Vec<i64>, DMatrix<C64>>,
}

fn check_spec(spec: &LatticeSpec) -> Result<()> {
    if spec.dimension == 0 || spec.dimension > 2 {
        return Err(Error::BadModel(format!(
            "dimension {} unsupported (1 or 2)",
            spec.dimension
        )));
    }
    if spec.sublattices == 0 {
        return Err(Error::BadModel("need at least one sublattice".into()));
    }
    if !(spec.kappa.is_finite() && spec.kappa >= 0.0) {
        return Err(Error::BadModel(format!("kappa = {} invalid", spec.kappa)));
    }
    for h in &spec.hoppings {
        if h.offset.len() != spec.dimension {
            return Err(Error::BadModel(format!(
                "hopping offset {:?} has wrong dimension",
                h.offset
            )));
        }
        if h.from >= spec.sublattices || h.to >= spec.sublattices {
            return Err(Error::BadModel(format!(
                "hopping sublattice ({}, {}) out of range",
                h.to, h.from
            )));
        }
    }
    for j in &spec.jumps {
        for t in &j.terms {
            if t.offset.len() != spec.dimension {
                return Err(Error::BadModel(format!(
                    "jump offset {:?} has wrong dimension",
                    t.offset
                )));
            }
            if t.sublattice >= spec.sublattices {
                return Err(Error::BadModel(format!(
                    "jump sublattice {} out of range",
                    t.sublattice
                )));
            }
        }
    }
    Ok(())
}

fn coherent_table(spec: &LatticeSpec) -> BTreeMap<Vec<i64>, DMatrix<C64>> {
    let ns = spec.sublattices;
    let mut table: BTreeMap<Vec<i64>, DMatrix<C64>> = BTreeMap::new();
    for h in &spec.hoppings {
        let m = table
            .entry(h.offset.clone())
            .or_insert_with(|| DMatrix::zeros(ns, ns));
        m[(h.to, h.from)] += h.amp;
    }
    table
}

fn hermiticity_check(table: &BTreeMap<Vec<i64>, DMatrix<C64>>, ns: usize) -> Result<()> {
    let zero = DMatrix::<C64>::zeros(ns, ns);
    for (dr, m) in table {
        let neg: Vec<i64> = dr.iter().map(|x| -x).collect();
        let partner = table.get(&neg).unwrap_or(&zero);
        for to in 0..ns {
            for from in 0..ns {
                let dev = (m[(to, from)] - partner[(from, to)].conj()).norm();
                if dev > HERMITICITY_TOL {
                    return Err(Error::NotHermitian {
                        offset: dr.clone(),
                        to,
                        from,
                        dev,
                    });
                }
            }
        }
    }
    Ok(())
}

fn prune(table: &mut BTreeMap<Vec<i64>, DMatrix<C64>>) {
    table.retain(|_, m| m.iter().any(|z| z.norm() > 0.0));
}

/// Assemble the effective single-excitation hopping table:
/// coherent table minus (i kappa / 2) * offset-pair convolution of the jump
/// coefficients. The coherent input must be Hermitian.
pub fn build_effective(spec: &LatticeSpec) -> Result<BuiltModel> {
    check_spec(spec)?;
    let ns = spec.sublattices;
    let mut table = coherent_table(spec);
    hermiticity_check(&table, ns)?;

    // Jt_{dr}[s, s'] -= (i kappa / 2) sum_mu sum_pairs conj(l_{u,s}) l_{u-dr, s'}
    // with u = offset of the conjugated term; dr = u - offset of the plain one.
    let half = C64::new(0.0, -0.5 * spec.kappa);
    for ch in &spec.jumps {
        for ti in &ch.terms {
            for tj in &ch.terms {
                let dr: Vec<i64> = ti
                    .offset
                    .iter()
                    .zip(&tj.offset)
                    .map(|(a, b)| a - b)
                    .collect();
                let m = table
                    .entry(dr)
                    .or_insert_with(|| DMatrix::zeros(ns, ns));
                m[(ti.sublattice, tj.sublattice)] += half * ti.coeff.conj() * tj.coeff;
            }
        }
    }
    prune(&mut table);
    Ok(BuiltModel { spec: spec.clone(), table })
}

/// Multiply a strictly Hermitian model (no jumps) by `i`: the spectrum rotates
/// from the real axis onto the negative imaginary axis, turning coherent
/// evolution into pure relaxation while preserving every matrix element
/// relation. Rejects models with jump channels or a non-Hermitian table.
pub fn wick_rotate(spec: &LatticeSpec) -> Result<BuiltModel> {
    check_spec(spec)?;
    if spec.jumps.iter().any(|j| !j.terms.is_empty()) {
        return Err(Error::HermitianRequired(
            "wick rotation is defined for jump-free models".into(),
        ));
    }
    let mut table = coherent_table(spec);
    hermiticity_check(&table, spec.sublattices)?;
    for m in table.values_mut() {
        *m *= C64::new(0.0, 1.0);
    }
    prune(&mut table);
    Ok(BuiltModel { spec: spec.clone(), table })
}

impl BuiltModel {
    /// Bloch matrix h_k = sum_dr Jt_dr e^{-i k·dr}.
    pub fn bloch(&self, k: &[f64]) -> DMatrix<C64> {
        assert_eq!(k.len(), self.spec.dimension, "k has wrong dimension");
        let ns = self.spec.sublattices;
        let mut h = DMatrix::<C64>::zeros(ns, ns);
        for (dr, m) in &self.table {
            let phase: f64 = dr.iter().zip(k).map(|(d, ki)| *d as f64 * ki).sum();
            let f = C64::from_polar(1.0, -phase);
            h.zip_apply(m, |a, b| *a += f * b);
        }
        h
    }

    /// Largest hopping range along each axis, used to budget quadrature grids.
    pub fn max_range(&self) -> Vec<i64> {
        let mut r = vec![0i64; self.spec.dimension];
        for dr in self.table.keys() {
            for (d, x) in dr.iter().enumerate() {
                r[d] = r[d].max(x.abs());
            }
        }
        r
    }
}

/// Index bookkeeping for a finite realization: emitters first (in `EmitterSet`
/// order), then photon modes in row-major cell order with the sublattice
/// index fastest.
#[derive(Debug, Clone)]
pub struct FiniteBasis {
    pub dimension: usize,
    pub extent: Vec<usize>,
    pub sublattices: usize,
    pub n_emitters: usize,
    pub boundary: Boundary,
}

impl FiniteBasis {
    pub fn n_cells(&self) -> usize {
        self.extent.iter().product()
    }

    pub fn n_photon(&self) -> usize {
        self.n_cells() * self.sublattices
    }

    pub fn dim(&self) -> usize {
        self.n_emitters + self.n_photon()
    }

    pub fn emitter_index(&self, n: usize) -> usize {
        assert!(n < self.n_emitters);
        n
    }

    /// Photon index for a cell given in absolute coordinates 0..extent.
    pub fn photon_index(&self, cell: &[i64], sublattice: usize) -> Option<usize> {
        let mut lin = 0usize;
        for (d, &c) in cell.iter().enumerate() {
            let l = self.extent[d] as i64;
            let c = match self.boundary {
                Boundary::Periodic => c.rem_euclid(l),
                Boundary::Open => {
                    if c < 0 || c >= l {
                        return None;
                    }
                    c
                }
            };
            lin = lin * self.extent[d] + c as usize;
        }
        Some(self.n_emitters + lin * self.sublattices + sublattice)
    }

    /// Inverse of `photon_index` for diagnostics and field extraction.
    pub fn photon_site(&self, index: usize) -> (Vec<i64>, usize) {
        assert!(index >= self.n_emitters);
        let p = index - self.n_emitters;
        let s = p % self.sublattices;
        let mut lin = p / self.sublattices;
        let mut cell = vec![0i64; self.dimension];
        for d in (0..self.dimension).rev() {
            cell[d] = (lin % self.extent[d]) as i64;
            lin /= self.extent[d];
        }
        (cell, s)
    }
}

/// Sparse single-excitation Hamiltonian on a finite lattice.
///
/// Emitter diagonal carries the complex detunings; the photon block is the
/// effective table realized with the requested boundary; the coupling block
/// places `g_n` between each emitter and its site. Out-of-range targets are
/// wrapped (periodic) or dropped (open).
pub fn real_space_hamiltonian(
    model: &BuiltModel,
    emitters: &EmitterSet,
    extent: &[usize],
    boundary: Boundary,
) -> Result<(CsrMatrix, FiniteBasis)> {
    if extent.len() != model.spec.dimension {
        return Err(Error::BadModel(format!(
            "extent {:?} has wrong dimension",
            extent
        )));
    }
    if extent.iter().any(|&l| l == 0) {
        return Err(Error::BadModel("zero extent".into()));
    }
    emitters.validate(&model.spec)?;
    let basis = FiniteBasis {
        dimension: model.spec.dimension,
        extent: extent.to_vec(),
        sublattices: model.spec.sublattices,
        n_emitters: emitters.len(),
        boundary,
    };
    for (i, e) in emitters.iter().enumerate() {
        if basis.photon_index(&e.cell, e.sublattice).is_none() {
            return Err(Error::BadEmitter {
                index: i,
                reason: format!("cell {:?} outside extent {:?}", e.cell, extent),
            });
        }
    }

    let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
    for (n, e) in emitters.iter().enumerate() {
        let ei = basis.emitter_index(n);
        let pi = basis.photon_index(&e.cell, e.sublattice).unwrap();
        triplets.push((ei, ei, e.delta));
        triplets.push((pi, ei, e.g));
        triplets.push((ei, pi, e.g.conj()));
    }

    // Photon block: iterate source cells in row-major order.
    let n_cells = basis.n_cells();
    let mut cell = vec![0i64; basis.dimension];
    for lin in 0..n_cells {
        let mut rest = lin;
        for d in (0..basis.dimension).rev() {
            cell[d] = (rest % extent[d]) as i64;
            rest /= extent[d];
        }
        for (dr, m) in &model.table {
            let target: Vec<i64> = cell.iter().zip(dr).map(|(c, d)| c + d).collect();
            for to in 0..basis.sublattices {
                for from in 0..basis.sublattices {
                    let amp = m[(to, from)];
                    if amp == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if let Some(ti) = basis.photon_index(&target, to) {
                        let fi = basis.photon_index(&cell, from).unwrap();
                        triplets.push((ti, fi, amp));
                    }
                }
            }
        }
    }

    Ok((CsrMatrix::from_triplets(basis.dim(), basis.dim(), &triplets), basis))
}

// ---------------------------------------------------------------------------
// Serialized model document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoppingDoc {
    pub offset: Vec<i64>,
    pub from: usize,
    pub to: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpTermDoc {
    pub offset: Vec<i64>,
    pub sublattice: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpDoc {
    pub channel: usize,
    pub terms: Vec<JumpTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmitterDoc {
    pub cell: Vec<i64>,
    pub sublattice: usize,
    pub g_re: f64,
    pub g_im: f64,
    pub delta_re: f64,
    pub delta_im: f64,
}

/// On-disk model description. `emitters` may be empty; CLI tools can add
/// emitters on top of a bare lattice document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    pub dimension: usize,
    pub sublattices: usize,
    pub kappa: f64,
    pub hoppings: Vec<HoppingDoc>,
    pub jumps: Vec<JumpDoc>,
    #[serde(default)]
    pub emitters: Vec<EmitterDoc>,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec {
            dimension: self.dimension,
            sublattices: self.sublattices,
            kappa: self.kappa,
            hoppings: self
                .hoppings
                .iter()
                .map(|h| HoppingTerm {
                    offset: h.offset.clone(),
                    from: h.from,
                    to: h.to,
                    amp: C64::new(h.re, h.im),
                })
                .collect(),
            jumps: self
                .jumps
                .iter()
                .map(|j| JumpOperatorSpec {
                    terms: j
                        .terms
                        .iter()
                        .map(|t| JumpTerm {
                            offset: t.offset.clone(),
                            sublattice: t.sublattice,
                            coeff: C64::new(t.re, t.im),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn emitter_set(&self) -> EmitterSet {
        EmitterSet::new(
            self.emitters
                .iter()
                .map(|e| EmitterSpec {
                    cell: e.cell.clone(),
                    sublattice: e.sublattice,
                    g: C64::new(e.g_re, e.g_im),
                    delta: C64::new(e.delta_re, e.delta_im),
                })
                .collect(),
        )
    }

    pub fn from_parts(spec: &LatticeSpec, emitters: &EmitterSet) -> Self {
        ModelDocument {
            dimension: spec.dimension,
            sublattices: spec.sublattices,
            kappa: spec.kappa,
            hoppings: spec
                .hoppings
                .iter()
                .map(|h| HoppingDoc {
                    offset: h.offset.clone(),
                    from: h.from,
                    to: h.to,
                    re: h.amp.re,
                    im: h.amp.im,
                })
                .collect(),
            jumps: spec
                .jumps
                .iter()
                .enumerate()
                .map(|(i, j)| JumpDoc {
                    channel: i,
                    terms: j
                        .terms
                        .iter()
                        .map(|t| JumpTermDoc {
                            offset: t.offset.clone(),
                            sublattice: t.sublattice,
                            re: t.coeff.re,
                            im: t.coeff.im,
                        })
                        .collect(),
                })
                .collect(),
            emitters: emitters
                .iter()
                .map(|e| EmitterDoc {
                    cell: e.cell.clone(),
                    sublattice: e.sublattice,
                    g_re: e.g.re,
                    g_im: e.g.im,
                    delta_re: e.delta.re,
                    delta_im: e.delta.im,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hatano_nelson_effective_table() {
        let m = catalog::hatano_nelson(0.6, 1.0).unwrap();
        // asymmetric effective hoppings J -+ kappa/2, on-site -i kappa
        assert!((m.table[&vec![1]][(0, 0)] - c(1.1, 0.0)).norm() < 1e-15);
        assert!((m.table[&vec![-1]][(0, 0)] - c(0.1, 0.0)).norm() < 1e-15);
        assert!((m.table[&vec![0]][(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn hatano_nelson_bloch_closure() {
        let m = catalog::hatano_nelson(0.6, 1.0).unwrap();
        for &k in &[0.0, 0.5, -1.3, std::f64::consts::PI] {
            let h = m.bloch(&[k]);
            let expect = c(2.0 * 0.6 * k.cos(), -(k.sin() + 1.0));
            assert!(
                (h[(0, 0)] - expect).norm() < 1e-14,
              "k={k}: {} vs {}",
                h[(0, 0)],
                expect
            );
        }
    }

    #[test]
    fn alternating_loss_bloch_matches_two_band_form() {
        let (j, kap) = (0.7, 1.0);
        let m = catalog::alternating_loss(j, kap).unwrap();
        for &k in &[0.0, 1.1, -2.2] {
            let h = m.bloch(&[k]);
            let e = C64::from_polar(1.0, -k);
            assert!((h[(0, 0)] - c(0.0, -kap)).norm() < 1e-14);
            assert!((h[(1, 1)]).norm() < 1e-14);
            assert!((h[(0, 1)] - j * (C64::new(1.0, 0.0) + e)).norm() < 1e-14);
            assert!((h[(1, 0)] - j * (C64::new(1.0, 0.0) + e.conj())).norm() < 1e-14);
        }
    }

    #[test]
    fn swap_lattice_bloch_and_square_identity() {
        let kap = 1.0;
        let m = catalog::swap2d(kap).unwrap();
        for &(kx, ky) in &[(0.0, 0.0), (1.0, -0.4), (2.5, 2.5), (std::f64::consts::PI, std::f64::consts::PI)] {
            let h = m.bloch(&[kx, ky]);
            let exy = C64::from_polar(1.0, -(kx + ky));
            assert!((h[(0, 0)] - c(0.0, -2.0 * kap)).norm() < 1e-13);
            assert!((h[(1, 1)] - c(0.0, -2.0 * kap)).norm() < 1e-13);
            assert!((h[(0, 1)] - kap * (C64::new(1.0, 0.0) + exy)).norm() < 1e-13);
            let hba = kap * (C64::from_polar(1.0, kx) + C64::from_polar(1.0, ky));
            assert!((h[(1, 0)] - hba).norm() < 1e-13);

            // (h + 2 i kappa)^2 = 2 kappa^2 (cos kx + cos ky) * identity
            let mut sq = h.clone();
            sq[(0, 0)] += c(0.0, 2.0 * kap);
            sq[(1, 1)] += c(0.0, 2.0 * kap);
            let sq = &sq * &sq;
            let want = c(2.0 * kap * kap * (kx.cos() + ky.cos()), 0.0);
            assert!((sq[(0, 0)] - want).norm() < 1e-12);
            assert!((sq[(1, 1)] - want).norm() < 1e-12);
            assert!(sq[(0, 1)].norm() < 1e-12);
            assert!(sq[(1, 0)].norm() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_coherent_input_is_rejected() {
        let spec = LatticeSpec {
            dimension: 1,
            sublattices: 1,
            kappa: 1.0,
            hoppings: vec![HoppingTerm {
                offset: vec![1],
                from: 0,
                to: 0,
                amp: c(1.0, 0.0),
            }],
            jumps: vec![],
        };
        assert!(matches!(
            build_effective(&spec),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn wick_rotate_requires_jump_free_model() {
        let m = catalog::hatano_nelson(1.0, 1.0).unwrap();
        assert!(matches!(
            wick_rotate(&m.spec),
            Err(Error::HermitianRequired(_))
        ));
    }

    #[test]
    fn wick_chain_matches_jump_construction() {
        // Building the relaxation chain from a jump channel L_x = a_x + a_{x+1}
        // at rate 2J must reproduce i times the Hermitian chain table.
        let j = 0.8;
        let rotated = catalog::wick_chain(j).unwrap();
        let jumps = LatticeSpec {
            dimension: 1,
            sublattices: 1,
            kappa: 2.0 * j,
            hoppings: vec![],
            jumps: vec![JumpOperatorSpec {
                terms: vec![
                    JumpTerm { offset: vec![0], sublattice: 0, coeff: c(1.0, 0.0) },
                    JumpTerm { offset: vec![1], sublattice: 0, coeff: c(1.0, 0.0) },
                ],
            }],
        };
        let built = build_effective(&jumps).unwrap();
        for k in [-2.0, 0.0, 0.9] {
            let a = rotated.bloch(&[k])[(0, 0)];
            let b = built.bloch(&[k])[(0, 0)];
            assert!((a - b).norm() < 1e-14, "k={k}: {a} vs {b}");
            let want = c(0.0, -2.0 * j * (1.0 + k.cos()));
            assert!((a - want).norm() < 1e-14);
        }
    }

    #[test]
    fn periodic_ring_spectrum_equals_bloch_samples() {
        let m = catalog::hatano_nelson(0.3, 1.0).unwrap();
        let emitters = EmitterSet::new(vec![]);
        let l = 4usize;
        let (h, basis) = real_space_hamiltonian(&m, &emitters, &[l], Boundary::Periodic).unwrap();
        assert_eq!(basis.dim(), l);
        let dense = h.to_dense();
        let eigs = crate::eigen::eigenvalues(&dense).unwrap();
        let mut expect: Vec<C64> = (0..l)
            .map(|q| {
                let k = 2.0 * std::f64::consts::PI * q as f64 / l as f64;
                m.bloch(&[k])[(0, 0)]
            })
            .collect();
        // match greedily
        let mut got = eigs.clone();
        for e in expect.drain(..) {
            let (idx, _) = got
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - e).norm().partial_cmp(&(b.1 - e).norm()).unwrap())
                .unwrap();
            assert!((got[idx] - e).norm() < 1e-10, "eigenvalue {e} missing");
            got.remove(idx);
        }
    }

    #[test]
    fn open_boundary_drops_wrapping_bonds() {
        let m = catalog::hatano_nelson(0.5, 1.0).unwrap();
        let emitters = EmitterSet::new(vec![]);
        let (h, basis) = real_space_hamiltonian(&m, &emitters, &[5], Boundary::Open).unwrap();
        let d = h.to_dense();
        assert_eq!(basis.dim(), 5);
        assert!(d[(0, 4)].norm() == 0.0);
        assert!(d[(4, 0)].norm() == 0.0);
        assert!((d[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15); // J + kappa/2
        assert!((d[(0, 1)] - c(0.0, 0.0)).norm() < 1e-15); // J - kappa/2 = 0 at J = kappa/2
    }

    #[test]
    fn emitter_block_layout() {
        let m = catalog::hatano_nelson(0.5, 1.0).unwrap();
        let emitters = EmitterSet::new(vec![
            EmitterSpec { cell: vec![3], sublattice: 0, g: c(0.4, 0.0), delta: c(0.2, -0.1) },
            EmitterSpec { cell: vec![1], sublattice: 0, g: c(0.3, 0.0), delta: c(-0.2, 0.0) },
        ]);
        let (h, basis) = real_space_hamiltonian(&m, &emitters, &[6], Boundary::Periodic).unwrap();
        let d = h.to_dense();
        // sorted: emitter 0 at cell 1, emitter 1 at cell 3
        assert_eq!(basis.dim(), 8);
        assert!((d[(0, 0)] - c(-0.2, 0.0)).norm() < 1e-15);
        assert!((d[(1, 1)] - c(0.2, -0.1)).norm() < 1e-15);
        let p1 = basis.photon_index(&[1], 0).unwrap();
        let p3 = basis.photon_index(&[3], 0).unwrap();
        assert!((d[(p1, 0)] - c(0.3, 0.0)).norm() < 1e-15);
        assert!((d[(0, p1)] - c(0.3, 0.0)).norm() < 1e-15);
        assert!((d[(p3, 1)] - c(0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn document_round_trip() {
        let m = catalog::alternating_loss(0.7, 1.0).unwrap();
        let emitters = EmitterSet::new(vec![EmitterSpec {
            cell: vec![2],
            sublattice: 0,
            g: c(1.2, 0.0),
            delta: c(0.0, 0.0),
        }]);
        let doc = ModelDocument::from_parts(&m.spec, &emitters);
        let text = doc.to_json().unwrap();
        let back = ModelDocument::from_json(&text).unwrap();
        assert_eq!(back.lattice(), m.spec);
        assert_eq!(back.emitter_set(), emitters);
    }
}
