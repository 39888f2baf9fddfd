use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{cone, ChainMap, Complex, Matrix};

/// An object on the circle with `n` spokes: a flag `V_0 -> ... -> V_n` of
/// vector spaces in degree 0 with a monodromy automorphism of each piece,
/// compatible with the flag maps. With no spokes, a local system.
#[derive(Clone, Debug)]
pub struct CircleObject<F: Field> {
    pub dims: Vec<usize>,
    /// `flag[i]: V_i -> V_{i+1}`.
    pub flag: Vec<Matrix<F>>,
    pub monodromy: Vec<Matrix<F>>,
}

impl<F: Field> CircleObject<F> {
    pub fn local_system(f: &F, rho: Matrix<F>) -> Result<Self> {
        Self::new(f, vec![rho.nrows()], Vec::new(), vec![rho])
    }

    pub fn new(f: &F, dims: Vec<usize>, flag: Vec<Matrix<F>>, monodromy: Vec<Matrix<F>>) -> Result<Self> {
        if dims.is_empty() || flag.len() + 1 != dims.len() || monodromy.len() != dims.len() {
            return Err(Error::InvalidConfig("flag and monodromy lengths disagree".into()));
        }
        for (i, r) in monodromy.iter().enumerate() {
            if r.nrows() != dims[i] || r.ncols() != dims[i] || !r.is_invertible(f) {
                return Err(Error::InvalidConfig(format!("monodromy {i} is not an automorphism")));
            }
        }
        for (i, g) in flag.iter().enumerate() {
            if g.nrows() != dims[i + 1] || g.ncols() != dims[i] {
                return Err(Error::InvalidConfig(format!("flag map {i} has the wrong shape")));
            }
            if !g.mul(f, &monodromy[i]).equals(f, &monodromy[i + 1].mul(f, g)) {
                return Err(Error::InvalidConfig(format!("monodromy does not preserve flag map {i}")));
            }
        }
        Ok(CircleObject { dims, flag, monodromy })
    }

    pub fn spokes(&self) -> usize {
        self.flag.len()
    }
}

/// `Hom` on the circle: the fiber of `Phi -> rho' Phi - Phi rho` on the
/// filtered Hom complex
/// `prod_i Hom(V_i, W_i) -> prod_i Hom(V_i, W_{i+1})`.
///
/// Twisting by `rho^{-1}` on the right instead gives the same cohomology,
/// since right multiplication by `rho` is invertible.
pub fn circle_hom<F: Field>(f: &F, x: &CircleObject<F>, y: &CircleObject<F>) -> Result<Complex<F>> {
    if x.spokes() != y.spokes() {
        return Err(Error::InvalidConfig("objects over different spoke sets".into()));
    }
    let n = x.spokes();
    // Hom(A, B) in degree 0 as row-major matrices: coordinate (r, c)
    let blocks0: Vec<(usize, usize)> = (0..=n).map(|i| (y.dims[i], x.dims[i])).collect();
    let blocks1: Vec<(usize, usize)> = (0..n).map(|i| (y.dims[i + 1], x.dims[i])).collect();
    let starts = |b: &[(usize, usize)]| -> Vec<usize> {
        b.iter().scan(0, |acc, &(r, c)| {
            let s = *acc;
            *acc += r * c;
            Some(s)
        })
        .collect()
    };
    let (s0, s1) = (starts(&blocks0), starts(&blocks1));
    let d0: usize = blocks0.iter().map(|(r, c)| r * c).sum();
    let d1: usize = blocks1.iter().map(|(r, c)| r * c).sum();
    let dense = |m: &Matrix<F>| m.to_dense(f);
    // phi -> l phi r as a matrix on row-major coordinates
    let sandwich = |l: &[Vec<F::El>], r: &[Vec<F::El>], (lr, lc): (usize, usize), (rr, rc): (usize, usize)| {
        let mut e = Vec::new();
        for i in 0..lc {
            for j in 0..rr {
                for a in 0..lr {
                    if f.is_zero(&l[a][i]) {
                        continue;
                    }
                    for b in 0..rc {
                        if !f.is_zero(&r[j][b]) {
                            e.push((a * rc + b, i * rr + j, f.mul(&l[a][i], &r[j][b])));
                        }
                    }
                }
            }
        }
        e
    };
    let ident = |k: usize| dense(&Matrix::identity(f, k));
    // delta(phi)_i = g_i phi_i - phi_{i+1} f_i
    let mut delta = Vec::new();
    for i in 0..n {
        let (gy, fx) = (dense(&y.flag[i]), dense(&x.flag[i]));
        for (r, c, v) in sandwich(&gy, &ident(x.dims[i]), (y.dims[i + 1], y.dims[i]), (x.dims[i], x.dims[i])) {
            delta.push((s1[i] + r, s0[i] + c, v));
        }
        for (r, c, v) in sandwich(&ident(y.dims[i + 1]), &fx, (y.dims[i + 1], y.dims[i + 1]), (x.dims[i + 1], x.dims[i])) {
            delta.push((s1[i] + r, s0[i + 1] + c, f.neg(&v)));
        }
    }
    let filt = Complex::new(f, 0, vec![d0, d1], vec![Matrix::from_entries(f, d1, d0, delta)])?;
    // twist - 1 on both terms
    let twist = |blocks: &[(usize, usize)], starts: &[usize], rows: &dyn Fn(usize) -> usize, cols: &dyn Fn(usize) -> usize, total| {
        let mut e = Vec::new();
        for (k, &(br, bc)) in blocks.iter().enumerate() {
            let (ry, rx) = (dense(&y.monodromy[rows(k)]), dense(&x.monodromy[cols(k)]));
            for (r, c, v) in sandwich(&ry, &ident(bc), (br, br), (bc, bc)) {
                e.push((starts[k] + r, starts[k] + c, v));
            }
            for (r, c, v) in sandwich(&ident(br), &rx, (br, br), (bc, bc)) {
                e.push((starts[k] + r, starts[k] + c, f.neg(&v)));
            }
        }
        Matrix::from_entries(f, total, total, e)
    };
    let t0 = twist(&blocks0, &s0, &|k| k, &|k| k, d0);
    let t1 = twist(&blocks1, &s1, &|k| k + 1, &|k| k, d1);
    let phi = ChainMap::from_degrees([(0, t0), (1, t1)].into_iter().collect());
    Ok(cone(f, &phi, &filt, &filt)?.shift(f, -1))
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleDuality {
    pub hom_xy: BTreeMap<i64, usize>,
    pub hom_yx: BTreeMap<i64, usize>,
    /// `h^i Hom(x, y) = h^{1-i} Hom(y, x)`.
    pub swapped: bool,
}

/// Duality on the compact circle (`d = 1`) for local systems.
pub fn circle_duality<F: Field>(f: &F, x: &CircleObject<F>, y: &CircleObject<F>) -> Result<CircleDuality> {
    let hom_xy = circle_hom(f, x, y)?.cohomology_dims(f);
    let hom_yx = circle_hom(f, y, x)?.cohomology_dims(f);
    let mirrored: BTreeMap<i64, usize> = hom_yx.iter().map(|(&m, &d)| (1 - m, d)).collect();
    Ok(CircleDuality { swapped: mirrored == hom_xy, hom_xy, hom_yx })
}

/// Random invertible matrix with small entries.
pub fn random_invertible<F: Field, R: Rng>(f: &F, rng: &mut R, n: usize) -> Matrix<F> {
    loop {
        let dense: Vec<Vec<F::El>> =
            (0..n).map(|_| (0..n).map(|_| f.from_i64(rng.gen_range(-2..=2))).collect()).collect();
        let m = Matrix::from_dense(f, &dense);
        if m.is_invertible(f) {
            return m;
        }
    }
}

/// Random local system of rank at most `max_rank`; half the time a
/// unipotent or scalar monodromy so that intertwiners actually occur.
pub fn random_local_system<F: Field, R: Rng>(f: &F, rng: &mut R, max_rank: usize) -> CircleObject<F> {
    let n = rng.gen_range(1..=max_rank);
    let rho = match rng.gen_range(0..3) {
        0 => random_invertible(f, rng, n),
        1 => Matrix::identity(f, n),
        _ => {
            let mut dense = vec![vec![f.zero(); n]; n];
            for (i, row) in dense.iter_mut().enumerate() {
                row[i] = f.one();
                if i + 1 < n {
                    row[i + 1] = f.from_i64(rng.gen_range(0..=1));
                }
            }
            Matrix::from_dense(f, &dense)
        }
    };
    CircleObject::local_system(f, rho).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn trivial_rank_one() {
        let f = Rationals;
        let l = CircleObject::local_system(&f, Matrix::identity(&f, 1)).unwrap();
        let h = circle_hom(&f, &l, &l).unwrap().cohomology_dims(&f);
        assert_eq!(h, [(0, 1), (1, 1)].into_iter().collect());
        let m = CircleObject::local_system(&f, Matrix::from_i64(&f, &[vec![-1]])).unwrap();
        assert!(circle_hom(&f, &l, &m).unwrap().cohomology_dims(&f).is_empty());
    }

    #[test]
    fn spokes_with_invariant_line() {
        let f = Rationals;
        // k -> k^2 onto the first coordinate, preserved by a unipotent
        let incl = Matrix::from_i64(&f, &[vec![1], vec![0]]);
        let rho = Matrix::from_i64(&f, &[vec![1, 1], vec![0, 1]]);
        let x = CircleObject::new(&f, vec![1, 2], vec![incl.clone()], vec![Matrix::identity(&f, 1), rho]).unwrap();
        let h = circle_hom(&f, &x, &x).unwrap().cohomology_dims(&f);
        assert_eq!(h.values().sum::<usize>() % 2, 0);
        let bad = Matrix::from_i64(&f, &[vec![1, 0], vec![1, 1]]);
        assert!(CircleObject::new(&f, vec![1, 2], vec![incl], vec![Matrix::identity(&f, 1), bad]).is_err());
    }
}
