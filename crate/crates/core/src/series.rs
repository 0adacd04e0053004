//! Building blocks shared by the closed-form series: multiple-angle
//! harmonics of `f` and `2g`, and small power tables.

use crate::elements::OrbitGeometry;
use crate::scalar::{k, Scalar};

/// Largest multiple of `f` any series in the theory uses.
pub(crate) const MAX_J: usize = 10;
/// Largest multiple of `2g`.
pub(crate) const MAX_I: usize = 2;

/// `cos(jf + 2ig)` and `sin(jf + 2ig)` for `|j| ≤ MAX_J`, `0 ≤ i ≤ MAX_I`,
/// built by recurrences from `(sin f, cos f)` and `(sin 2g, cos 2g)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Harmonics<S> {
    cos_jf: [S; MAX_J + 1],
    sin_jf: [S; MAX_J + 1],
    cos_ig: [S; MAX_I + 1],
    sin_ig: [S; MAX_I + 1],
}

impl<S: Scalar> Harmonics<S> {
    pub(crate) fn new(o: &OrbitGeometry<S>) -> Self {
        let (s1, c1) = (o.sin_f, o.cos_f);
        let mut cos_jf = [S::one(); MAX_J + 1];
        let mut sin_jf = [S::zero(); MAX_J + 1];
        cos_jf[1] = c1;
        sin_jf[1] = s1;
        let two_c = c1 * k::<S>(2.0);
        for j in 2..=MAX_J {
            cos_jf[j] = two_c * cos_jf[j - 1] - cos_jf[j - 2];
            sin_jf[j] = two_c * sin_jf[j - 1] - sin_jf[j - 2];
        }
        let (sg, cg) = (o.g * k::<S>(2.0)).sin_cos();
        let cos_ig = [S::one(), cg, k::<S>(2.0) * cg * cg - S::one()];
        let sin_ig = [S::zero(), sg, k::<S>(2.0) * sg * cg];
        Self {
            cos_jf,
            sin_jf,
            cos_ig,
            sin_ig,
        }
    }

    #[inline]
    fn jf(&self, j: i32) -> (S, S) {
        let a = j.unsigned_abs() as usize;
        if j < 0 {
            (-self.sin_jf[a], self.cos_jf[a])
        } else {
            (self.sin_jf[a], self.cos_jf[a])
        }
    }

    /// `cos(jf + 2ig)`.
    #[inline]
    pub(crate) fn cos(&self, j: i32, i: usize) -> S {
        let (s, c) = self.jf(j);
        c * self.cos_ig[i] - s * self.sin_ig[i]
    }

    /// `sin(jf + 2ig)`.
    #[inline]
    pub(crate) fn sin(&self, j: i32, i: usize) -> S {
        let (s, c) = self.jf(j);
        s * self.cos_ig[i] + c * self.sin_ig[i]
    }

    /// `cos 2ig`.
    #[inline]
    pub(crate) fn cos_g(&self, i: usize) -> S {
        self.cos_ig[i]
    }

    /// `sin 2ig`.
    #[inline]
    pub(crate) fn sin_g(&self, i: usize) -> S {
        self.sin_ig[i]
    }
}

/// `[1, x, x², …, x^N]`.
#[inline]
pub(crate) fn powers<S: Scalar, const N: usize>(x: S) -> [S; N] {
    let mut out = [S::one(); N];
    for n in 1..N {
        out[n] = out[n - 1] * x;
    }
    out
}

/// `j mod 2` for any sign of `j`.
#[inline]
pub(crate) fn parity(j: i32) -> i32 {
    j.rem_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::DelaunayState;

    #[test]
    fn recurrences_match_direct_evaluation() {
        let d = DelaunayState {
            l: 2.1,
            g: 0.7,
            h: 0.0,
            big_l: 60_000.0,
            big_g: 55_000.0,
            big_h: 30_000.0,
        };
        let o = OrbitGeometry::new(&d, 398_600.441_5).unwrap();
        let hm = Harmonics::new(&o);
        for j in -(MAX_J as i32)..=MAX_J as i32 {
            for i in 0..=MAX_I {
                let arg = j as f64 * o.f + 2.0 * i as f64 * o.g;
                assert!((hm.cos(j, i) - arg.cos()).abs() < 1e-13, "cos j={j} i={i}");
                assert!((hm.sin(j, i) - arg.sin()).abs() < 1e-13, "sin j={j} i={i}");
            }
        }
        assert_eq!(parity(-1), 1);
        assert_eq!(parity(-2), 0);
        assert_eq!(powers::<f64, 4>(2.0), [1.0, 2.0, 4.0, 8.0]);
    }
}
