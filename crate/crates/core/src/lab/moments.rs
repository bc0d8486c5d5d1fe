//! Moment functionals and Gram matrices.
//!
//! For a family with `deg P_n = n` the conditions `L[P_0] = 1`,
//! `L[P_n] = 0` (n ≥ 1) fix the moments uniquely. Degree-defective families
//! get a padded functional instead: the same conditions are imposed where
//! they can be, every moment left free is set to zero, and a small
//! rational neighbourhood of free moments is swept.

use serde::{Deserialize, Serialize};

use super::LabError;
use crate::algebra::{Rat, UPoly};
use crate::ode::PolySequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentFunctional {
    pub moments: Vec<Rat>,
}

impl MomentFunctional {
    pub fn new(moments: Vec<Rat>) -> Self {
        MomentFunctional { moments }
    }

    /// `m_k = c^k`, evaluation at `c`.
    pub fn point_mass(c: &Rat, len: usize) -> Self {
        MomentFunctional {
            moments: (0..len).map(|k| c.pow(k as u32)).collect(),
        }
    }

    pub fn apply(&self, p: &UPoly) -> Result<Rat, LabError> {
        if p.coeffs().len() > self.moments.len() {
            return Err(LabError::InsufficientMoments {
                need: p.coeffs().len(),
                have: self.moments.len(),
            });
        }
        Ok(p.coeffs().iter().zip(&self.moments).map(|(c, m)| c * m).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub size: usize,
    pub entries: Vec<Vec<Rat>>,
}

impl GramMatrix {
    pub fn off_diagonal_nonzero(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                if !self.entries[i][j].is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_nonzero().is_empty()
    }

    pub fn diagonal_nonzero(&self) -> bool {
        (0..self.size).all(|i| !self.entries[i][i].is_zero())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.entries.clone();
        rank_in_place(&mut m)
    }
}

fn rank_in_place(m: &mut [Vec<Rat>]) -> usize {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..cols {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= &sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Moments `m_0 ..= m_N` from `L[P_0] = 1`, `L[P_n] = 0`.
pub fn moments_from_sequence(seq: &PolySequence) -> Result<MomentFunctional, LabError> {
    let mut moments: Vec<Rat> = Vec::with_capacity(seq.len());
    for (n, p) in seq.entries.iter().enumerate() {
        if p.degree() != Some(n) {
            return Err(LabError::DegreeDefect { n });
        }
        let target = if n == 0 { Rat::one() } else { Rat::zero() };
        let lower: Rat = p.coeffs()[..n].iter().zip(&moments).map(|(c, m)| c * m).sum();
        moments.push((target - lower) / p.leading());
    }
    Ok(MomentFunctional { moments })
}

/// `G[i][j] = L[P_i P_j]` for `i, j < size`.
pub fn gram_matrix(seq: &PolySequence, l: &MomentFunctional, size: usize) -> Result<GramMatrix, LabError> {
    if size > seq.len() {
        return Err(LabError::WrongShape(format!(
            "Gram size {size} exceeds sequence length {}",
            seq.len()
        )));
    }
    let mut entries = vec![vec![Rat::zero(); size]; size];
    for i in 0..size {
        for j in i..size {
            let v = l.apply(&seq.entries[i].mul(&seq.entries[j]))?;
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
    }
    Ok(GramMatrix { size, entries })
}

/// Affine family of functionals `base + Σ t_k · directions[k]` satisfying
/// every consistent condition `L[P_0] = 1`, `L[P_n] = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedFunctional {
    /// Free moments set to zero.
    pub base: MomentFunctional,
    /// Indices of the free moments, ascending.
    pub free: Vec<usize>,
    pub directions: Vec<Vec<Rat>>,
    /// Sequence indices whose condition contradicted earlier ones.
    pub inconsistent: Vec<usize>,
}

impl PaddedFunctional {
    /// Builds the family with moments up to `max_degree`, using every entry
    /// of `seq` whose degree fits.
    pub fn build(seq: &PolySequence, max_degree: usize) -> Self {
        let width = max_degree + 1;
        // rows: coefficient vector | rhs
        let mut rows: Vec<(Vec<Rat>, Rat, usize)> = Vec::new();
        for (n, p) in seq.entries.iter().enumerate() {
            if p.degree().is_none_or(|d| d > max_degree) {
                continue;
            }
            let mut row = vec![Rat::zero(); width];
            for (k, c) in p.coeffs().iter().enumerate() {
                row[k] = c.clone();
            }
            let rhs = if n == 0 { Rat::one() } else { Rat::zero() };
            rows.push((row, rhs, n));
        }
        // eliminate, pivoting on the highest nonzero column of each row
        let mut pivots: Vec<(usize, Vec<Rat>, Rat)> = Vec::new();
        let mut inconsistent = Vec::new();
        for (mut row, mut rhs, n) in rows {
            for (col, prow, prhs) in &pivots {
                if !row[*col].is_zero() {
                    let f = row[*col].clone();
                    for k in 0..width {
                        let sub = &f * &prow[k];
                        row[k] -= &sub;
                    }
                    rhs -= &(&f * prhs);
                }
            }
            match (0..width).rev().find(|&k| !row[k].is_zero()) {
                None => {
                    if !rhs.is_zero() {
                        inconsistent.push(n);
                    }
                }
                Some(col) => {
                    let inv = row[col].recip();
                    for v in row.iter_mut() {
                        *v = &*v * &inv;
                    }
                    rhs = rhs * &inv;
                    // keep earlier pivot rows reduced
                    for (_, prow, prhs) in pivots.iter_mut() {
                        if !prow[col].is_zero() {
                            let f = prow[col].clone();
                            for k in 0..width {
                                let sub = &f * &row[k];
                                prow[k] -= &sub;
                            }
                            *prhs -= &(&f * &rhs);
                        }
                    }
                    pivots.push((col, row, rhs));
                }
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _, _)| *c).collect();
        let free: Vec<usize> = (0..width).filter(|k| !pivot_cols.contains(k)).collect();
        let mut base = vec![Rat::zero(); width];
        for (col, _, rhs) in &pivots {
            base[*col] = rhs.clone();
        }
        let directions = free
            .iter()
            .map(|&f| {
                let mut d = vec![Rat::zero(); width];
                d[f] = Rat::one();
                for (col, row, _) in &pivots {
                    d[*col] = -&row[f];
                }
                d
            })
            .collect();
        PaddedFunctional {
            base: MomentFunctional::new(base),
            free,
            directions,
            inconsistent,
        }
    }

    /// Member of the family with the first `params.len()` free moments set.
    pub fn member(&self, params: &[Rat]) -> MomentFunctional {
        let mut m = self.base.moments.clone();
        for (t, d) in params.iter().zip(&self.directions) {
            for (mk, dk) in m.iter_mut().zip(d) {
                *mk += &(t * dk);
            }
        }
        MomentFunctional::new(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityProbe {
    pub size: usize,
    pub free_moments: usize,
    pub inconsistent_conditions: Vec<usize>,
    pub functionals_tested: usize,
    pub functionals_diagonal: usize,
    /// Gram matrix of the padded functional itself.
    pub base_gram: GramMatrix,
}

impl OrthogonalityProbe {
    pub fn orthogonal_functional_found(&self) -> bool {
        self.functionals_diagonal > 0
    }
}

/// Grid of parameter values for each of the three swept free moments.
pub fn default_probe_grid() -> Vec<Rat> {
    [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(p, q)| Rat::new(p, q))
        .collect()
}

/// Sweeps the padded functional and up to three of its free moments over
/// `grid`, counting functionals whose `size × size` Gram matrix is diagonal.
pub fn probe_orthogonality(seq: &PolySequence, size: usize, grid: &[Rat]) -> Result<OrthogonalityProbe, LabError> {
    if size > seq.len() {
        return Err(LabError::WrongShape(format!(
            "Gram size {size} exceeds sequence length {}",
            seq.len()
        )));
    }
    let max_deg = seq.entries[..size]
        .iter()
        .filter_map(UPoly::degree)
        .max()
        .unwrap_or(0);
    let family = PaddedFunctional::build(seq, 2 * max_deg);
    let base_gram = gram_matrix(seq, &family.base, size)?;
    let k = family.free.iter().filter(|&&f| f > 0).count().min(3);
    let mut tested = 0;
    let mut diagonal = 0;
    let total = grid.len().pow(k as u32);
    for idx in 0..total {
        let mut rem = idx;
        let params: Vec<Rat> = (0..k)
            .map(|_| {
                let v = grid[rem % grid.len()].clone();
                rem /= grid.len();
                v
            })
            .collect();
        let l = family.member(&params);
        let g = gram_matrix(seq, &l, size)?;
        tested += 1;
        if g.is_diagonal() {
            diagonal += 1;
        }
    }
    Ok(OrthogonalityProbe {
        size,
        free_moments: family.free.len(),
        inconsistent_conditions: family.inconsistent,
        functionals_tested: tested,
        functionals_diagonal: diagonal,
        base_gram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bindings, MPoly};
    use crate::lab::generate_sequence;
    use crate::ode::Recurrence;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn family(c2: &str, n: usize) -> PolySequence {
        let r = Recurrence::new("n", "x", 1, 0, vec![MPoly::one(), p("-x"), p(c2)]).unwrap();
        generate_sequence(&r, &Bindings::new(), n).unwrap()
    }

    #[test]
    fn chebyshev_like_moments() {
        let l = moments_from_sequence(&family("1/4", 2)).unwrap();
        assert_eq!(l.moments, vec![Rat::one(), Rat::zero(), Rat::new(1, 4)]);
    }

    #[test]
    fn hermite_moments_and_gram() {
        let seq = family("(n-1)/2", 14);
        let l = moments_from_sequence(&seq).unwrap();
        assert_eq!(l.moments[1], Rat::zero());
        assert_eq!(l.moments[2], Rat::new(1, 2));
        let g = gram_matrix(&seq, &l, 8).unwrap();
        assert!(g.is_diagonal());
        assert!(g.diagonal_nonzero());
    }

    #[test]
    fn degree_defect() {
        let seq = PolySequence {
            spectral: "s".into(),
            entries: vec![UPoly::one("s"), UPoly::from_ints("s", &[1, 0, 1])],
            custom_seed: false,
        };
        assert_eq!(moments_from_sequence(&seq), Err(LabError::DegreeDefect { n: 1 }));
    }

    #[test]
    fn point_mass_rank_one() {
        let seq = family("(n-1)/2", 5);
        let c = Rat::new(3, 2);
        let l = MomentFunctional::point_mass(&c, 11);
        let g = gram_matrix(&seq, &l, 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.entries[i][j], seq.entries[i].eval(&c) * seq.entries[j].eval(&c));
            }
        }
        assert!(g.rank() <= 1);
    }

    #[test]
    fn insufficient_moments() {
        let seq = family("(n-1)/2", 5);
        let l = MomentFunctional::new(vec![Rat::one(), Rat::zero()]);
        assert!(matches!(gram_matrix(&seq, &l, 3), Err(LabError::InsufficientMoments { .. })));
    }

    #[test]
    fn padded_functional_reduces_to_standard() {
        let seq = family("(n-1)/2", 10);
        let pf = PaddedFunctional::build(&seq, 10);
        assert!(pf.free.is_empty());
        assert_eq!(pf.base, moments_from_sequence(&seq).unwrap());
        let probe = probe_orthogonality(&seq, 6, &default_probe_grid()).unwrap();
        assert_eq!(probe.functionals_tested, 1);
        assert!(probe.orthogonal_functional_found());
    }
}
