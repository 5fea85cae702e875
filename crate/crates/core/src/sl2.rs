//! 2x2 integer matrices and representations of free groups in SL2(Z).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::Int;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Int> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Mat2<T> {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2<T> {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn mul(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    /// The inverse of a determinant-one matrix.
    pub fn inverse_sl(&self) -> Mat2<T> {
        Mat2::new(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
    }

    pub fn pow(&self, k: i64) -> Mat2<T> {
        let base = if k < 0 {
            self.inverse_sl()
        } else {
            self.clone()
        };
        let mut acc = Mat2::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn congruent_identity(&self, p: &T) -> bool {
        let z = |x: &T| x.mod_floor(p).is_zero();
        z(&(self.a.clone() - T::one()))
            && z(&self.b)
            && z(&self.c)
            && z(&(self.d.clone() - T::one()))
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Images of the letters of a free group, all in the level-`p` congruence
/// subgroup of SL2(Z).
#[derive(Clone, Debug)]
pub struct SL2Rep {
    images: Vec<Mat2<BigInt>>,
    p: BigInt,
}

impl SL2Rep {
    pub fn new(images: Vec<Mat2<BigInt>>, p: u64) -> Result<SL2Rep> {
        let p = BigInt::from(p);
        for (i, m) in images.iter().enumerate() {
            if !m.det().is_one() {
                return Err(Error::Precondition(format!(
                    "matrix {} = {m} has determinant {}",
                    i + 1,
                    m.det()
                )));
            }
            if !m.congruent_identity(&p) {
                return Err(Error::Precondition(format!(
                    "matrix {} = {m} is not congruent to the identity mod {p}",
                    i + 1
                )));
            }
        }
        Ok(SL2Rep { images, p })
    }

    pub fn from_i64(images: &[[i64; 4]], p: u64) -> Result<SL2Rep> {
        let ms = images
            .iter()
            .map(|m| Mat2::new(m[0].into(), m[1].into(), m[2].into(), m[3].into()))
            .collect();
        SL2Rep::new(ms, p)
    }

    /// `[[1,2],[0,1]]` and `[[1,0],[2,1]]`, which generate a free group.
    pub fn sanov() -> SL2Rep {
        SL2Rep::from_i64(&[[1, 2, 0, 1], [1, 0, 2, 1]], 2).expect("valid")
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    pub fn images(&self) -> &[Mat2<BigInt>] {
        &self.images
    }

    pub fn eval(&self, w: &Word) -> Mat2<BigInt> {
        let mut acc = Mat2::identity();
        for l in w.letters() {
            let m = &self.images[l.index() - 1];
            acc = if l.is_inverse() {
                acc.mul(&m.inverse_sl())
            } else {
                acc.mul(m)
            };
        }
        acc
    }
}
