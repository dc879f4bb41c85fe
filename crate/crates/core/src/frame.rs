//! The adapted basis of `g` used by the PBW engine: the co-basis of `m`
//! (`x`, `y`, the first halves of `u` and `v`) followed by a basis of `m`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{mat_pow, AlgebraError, LieSuperalgebra, Matrix, Parity};
use crate::linalg::{self, SparseVec};
use crate::nilpotent::{Dims, NilpotentData};
use crate::scalar::{Field, PrimeField, Rationals, ScalarError};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("adapted basis is singular")]
    Singular,
    #[error("adapted basis does not reduce mod {0}")]
    NotIntegral(u64),
    #[error("p-th power of {0} leaves the algebra")]
    PowerEscapes(String),
    #[error("eta must vanish on odd generators and agree with chi on m")]
    BadEta,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    X,
    Y,
    U,
    V,
    /// A basis vector of `m`.
    M,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub kind: GenKind,
    pub parity: Parity,
    pub weight: i32,
    /// The vector in terms of the original basis labels.
    pub expr: String,
}

impl Generator {
    /// Kazhdan degree of the generator: weight plus two.
    pub fn e_degree(&self) -> i32 {
        self.weight + 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame<F: Field> {
    pub field: F,
    pub dims: Dims,
    pub gens: Vec<Generator>,
    /// Number of leading generators that survive in the Gelfand-Graev module.
    pub n_cobasis: usize,
    /// `brackets[i][j] = [g_i, g_j]` in frame coordinates.
    pub brackets: Vec<Vec<SparseVec<F::Elem>>>,
    /// `chi(g_i)`.
    pub chi: Vec<F::Elem>,
    /// `eta(g_i)`; equal to `chi` unless shifted.
    pub eta: Vec<F::Elem>,
    /// `g_i^[p]` for even generators in positive characteristic.
    pub p_map: Option<Vec<Option<SparseVec<F::Elem>>>>,
    /// Row `i` holds the coordinates of `g_i` in the original basis.
    pub gen_coords: Matrix<F::Elem>,
    /// Inverse change of basis: original coordinates to frame coordinates.
    pub from_basis: Matrix<F::Elem>,
    /// Frame index of the self-paired odd vector when `r` is odd.
    pub middle: Option<usize>,
    pub middle_norm: Option<F::Elem>,
}

/// Renders a coordinate vector as a combination of basis labels.
pub fn describe<F: Field>(f: &F, labels: &[String], v: &[F::Elem]) -> String {
    let mut out = String::new();
    for (x, label) in v.iter().zip(labels) {
        if f.is_zero(x) {
            continue;
        }
        let s = f.to_scalar(x).to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let body = body.strip_suffix("/1").map(str::to_string).unwrap_or(body);
        if !out.is_empty() || neg {
            out.push(if neg { '-' } else { '+' });
        }
        if body != "1" {
            out.push_str(&body);
            out.push('*');
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out.strip_prefix('+').map(str::to_string).unwrap_or(out)
}

impl<F: Field> Frame<F> {
    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.gens[i].parity
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].parity.is_odd()
    }

    pub fn weight(&self, i: usize) -> i32 {
        self.gens[i].weight
    }

    pub fn m_indices(&self) -> std::ops::Range<usize> {
        self.n_cobasis..self.dim()
    }

    /// `m` together with the middle odd vector when `r` is odd.
    pub fn mprime_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.m_indices().collect();
        if let Some(mid) = self.middle {
            out.push(mid);
        }
        out
    }

    /// Frame index of the leading generator `Y_k` of the k-th W generator (0-based `k`).
    pub fn theta_leads(&self) -> Vec<usize> {
        let d = &self.dims;
        let mut out: Vec<usize> = (0..d.l).collect();
        out.extend(d.m..d.m + d.q);
        if let Some(mid) = self.middle {
            out.push(mid);
        }
        out
    }

    /// Generators whose monomials span the associated graded of the W-algebra:
    /// the centralizer part of the co-basis and the middle vector.
    pub fn is_pure(&self, i: usize) -> bool {
        let d = &self.dims;
        i < d.l || (d.m..d.m + d.q).contains(&i) || Some(i) == self.middle
    }

    pub fn bracket_gens(&self, i: usize, j: usize) -> &SparseVec<F::Elem> {
        &self.brackets[i][j]
    }

    /// Bracket of two vectors given in frame coordinates.
    pub fn bracket(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, c) in &self.brackets[i][j] {
                    f.add_mul(&mut out[*k], &ab, c);
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.dim()).map(|j| if i == j { f.one() } else { f.zero() }).collect()
    }

    /// Replaces `eta`; it must vanish on odd generators and agree with
    /// `chi` on `m`.
    pub fn with_eta(mut self, eta: Vec<F::Elem>) -> Result<Self, FrameError> {
        let f = &self.field;
        if eta.len() != self.dim() {
            return Err(FrameError::BadEta);
        }
        for i in 0..self.dim() {
            let odd_ok = !self.is_odd(i) || f.is_zero(&eta[i]);
            let m_ok = i < self.n_cobasis || eta[i] == self.chi[i];
            if !odd_ok || !m_ok {
                return Err(FrameError::BadEta);
            }
        }
        self.eta = eta;
        Ok(self)
    }

    /// Shifts of `chi` by the dual functional of each even co-basis generator.
    pub fn eta_directions(&self) -> Vec<usize> {
        (0..self.n_cobasis).filter(|&i| !self.is_odd(i)).collect()
    }

    /// Labels of the generators, in order.
    pub fn labels(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.label.clone()).collect()
    }
}

impl Frame<Rationals> {
    pub fn rational(alg: &LieSuperalgebra<Rationals>, nd: &NilpotentData) -> Result<Self, FrameError> {
        let f = Rationals;
        let d = nd.dims;
        let t_co = d.v_cobasis();
        let cob = &nd.cobasis;
        let labels: Vec<String> = alg.basis.iter().map(|b| b.label.clone()).collect();
        let mut gens = Vec::new();
        let mut coords: Matrix<Q> = Vec::new();
        let mut push = |kind: GenKind, label: String, v: &crate::nilpotent::GradedVector| {
            gens.push(Generator {
                label,
                kind,
                parity: v.parity,
                weight: v.weight,
                expr: describe(&f, &labels, &v.coords),
            });
            coords.push(v.coords.clone());
        };
        for (i, x) in cob.x.iter().enumerate() {
            push(GenKind::X, format!("x{}", i + 1), x);
        }
        for (i, y) in cob.y.iter().enumerate() {
            push(GenKind::Y, format!("y{}", i + 1), y);
        }
        for (i, u) in cob.u[..d.s].iter().enumerate() {
            push(GenKind::U, format!("u{}", i + 1), u);
        }
        for (i, v) in cob.v[..t_co].iter().enumerate() {
            push(GenKind::V, format!("v{}", i + 1), v);
        }
        let n_cobasis = d.m + d.n + d.s + t_co;
        for (i, z) in nd.m_basis.iter().enumerate() {
            let label = if i < d.s {
                format!("u{}", d.s + i + 1)
            } else if i < d.s + (d.r - t_co) {
                format!("v{}", t_co + i - d.s + 1)
            } else {
                format!("z{}", i - d.s - (d.r - t_co) + 1)
            };
            push(GenKind::M, label, z);
        }
        let dim = alg.dim();
        if gens.len() != dim {
            return Err(FrameError::Singular);
        }
        // Columns of the change of basis are the generators.
        let p = linalg::transpose(&coords);
        let pinv = linalg::inverse(&f, &p).ok_or(FrameError::Singular)?;
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let b = alg.bracket(&coords[i], &coords[j]);
                brackets[i][j] = linalg::dense_to_sparse(&f, &linalg::mat_vec(&f, &pinv, &b));
            }
        }
        let chi: Vec<Q> = coords.iter().map(|c| linalg::dot(&f, &nd.chi, c)).collect();
        let middle = d.r_odd().then(|| d.m + d.n + d.s + t_co - 1);
        Ok(Frame {
            field: f,
            dims: d,
            gens,
            n_cobasis,
            brackets,
            eta: chi.clone(),
            chi,
            p_map: None,
            gen_coords: coords,
            from_basis: pinv,
            middle,
            middle_norm: nd.middle_norm.clone(),
        })
    }

    /// Reduction modulo an odd prime, with the p-map of every even generator
    /// computed as the p-th matrix power in the realization.
    pub fn modular(&self, alg: &LieSuperalgebra<Rationals>, p: u64) -> Result<Frame<PrimeField>, FrameError> {
        let fp = PrimeField::new(p)?;
        let red = |q: &Q| fp.from_rational(q).map_err(|_| FrameError::NotIntegral(p));
        let red_vec = |v: &[Q]| v.iter().map(red).collect::<Result<Vec<u64>, _>>();
        let red_sparse = |v: &SparseVec<Q>| -> Result<SparseVec<u64>, FrameError> {
            let mut out = Vec::new();
            for (i, x) in v {
                let y = red(x)?;
                if y != 0 {
                    out.push((*i, y));
                }
            }
            Ok(out)
        };
        let brackets = self
            .brackets
            .iter()
            .map(|row| row.iter().map(red_sparse).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let gen_coords = self.gen_coords.iter().map(|r| red_vec(r)).collect::<Result<Vec<_>, _>>()?;
        let from_basis = self.from_basis.iter().map(|r| red_vec(r)).collect::<Result<Vec<_>, _>>()?;
        // The reduced change of basis must stay invertible.
        let check = linalg::mat_mul(&fp, &from_basis, &linalg::transpose(&gen_coords));
        let dim = self.dim();
        for (i, row) in check.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if *x != u64::from(i == j) {
                    return Err(FrameError::NotIntegral(p));
                }
            }
        }
        let alg_p = alg.reduce_constants(p)?;
        let real = alg_p.realization.as_ref().ok_or(AlgebraError::NoRealization)?;
        let mut p_map = vec![None; dim];
        for i in 0..dim {
            if self.is_odd(i) {
                continue;
            }
            let mat = real.matrix_of(&fp, &gen_coords[i]);
            let pow = mat_pow(&fp, &mat, p);
            let c = real.coords(&fp, &pow).ok_or_else(|| FrameError::PowerEscapes(self.gens[i].label.clone()))?;
            p_map[i] = Some(linalg::dense_to_sparse(&fp, &linalg::mat_vec(&fp, &from_basis, &c)));
        }
        let chi = red_vec(&self.chi)?;
        let middle_norm = self.middle_norm.as_ref().map(red).transpose()?;
        Ok(Frame {
            field: fp,
            dims: self.dims,
            gens: self.gens.clone(),
            n_cobasis: self.n_cobasis,
            brackets,
            eta: chi.clone(),
            chi,
            p_map: Some(p_map),
            gen_coords,
            from_basis,
            middle: self.middle,
            middle_norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};
    use crate::nilpotent::{analyze_element, nilpotent_preset};

    fn frame(fam: Family, m: usize, n: usize, e: &str) -> (LieSuperalgebra<Rationals>, Frame<Rationals>) {
        let alg = build_algebra(fam, m, n).unwrap();
        let ev = nilpotent_preset(&alg, e).unwrap();
        let nd = analyze_element(&alg, &ev, e).unwrap();
        let fr = Frame::rational(&alg, &nd).unwrap();
        (alg, fr)
    }

    #[test]
    fn sl21_frame_layout() {
        let (_, fr) = frame(Family::Sl, 2, 1, "E12");
        let kinds: Vec<GenKind> = fr.gens.iter().map(|g| g.kind).collect();
        use GenKind::*;
        assert_eq!(kinds, vec![X, X, X, Y, Y, V, M, M]);
        assert_eq!(fr.n_cobasis, 6);
        assert_eq!(fr.theta_leads(), vec![0, 1, 3, 4]);
        // chi lives on the weight -2 part of m only.
        for i in 0..fr.dim() {
            if fr.weight(i) != -2 {
                assert_eq!(fr.chi[i], Q::from_integer(0.into()));
            }
        }
    }

    #[test]
    fn osp12_modular_frame_has_p_map() {
        let (alg, fr) = frame(Family::Osp, 1, 2, "regular");
        assert_eq!(fr.middle, Some(3));
        let fp = fr.modular(&alg, 5).unwrap();
        let pm = fp.p_map.as_ref().unwrap();
        for i in 0..fp.dim() {
            assert_eq!(pm[i].is_some(), !fp.is_odd(i));
        }
    }

    #[test]
    fn describe_vectors() {
        let labels = vec!["A".to_string(), "B".to_string()];
        let v = vec![Q::new((-1).into(), 2.into()), Q::from_integer(1.into())];
        assert_eq!(describe(&Rationals, &labels, &v), "-1/2*A+B");
    }
}
