//! Integer relations among rows of a high-precision complex matrix.

use super::hp::{digits_to_bits, round_to_integer, ten_pow_neg, CMatrix, HPComplex, MIN_DIGITS};
use super::lll::{default_delta, lll_gram};
use super::matrix::IMatrix;
use rug::{Float, Integer};

/// Scale increment between successive reduction passes.
const STAGE_DIGITS: u32 = 20;

/// ‖v·A‖∞ over real and imaginary parts.
pub fn relation_residual(v: &[Integer], a: &CMatrix) -> Float {
    let bits = a.prec();
    let mut worst = Float::new(bits);
    for j in 0..a.cols() {
        let mut acc = HPComplex::zero(bits);
        for (i, c) in v.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let cf = Float::with_val(bits, c);
            acc = &acc + &a[(i, j)].scale(&cf);
        }
        for part in [acc.re, acc.im] {
            let x = part.abs();
            if x > worst {
                worst = x;
            }
        }
    }
    worst
}

fn scaled_real_parts(a: &CMatrix, scale: u32) -> IMatrix {
    let bits = a.prec();
    let c = Float::with_val(bits, rug::ops::Pow::pow(Float::with_val(bits, 10), scale));
    let m = a.cols();
    IMatrix::from_fn(a.rows(), 2 * m, |i, j| {
        let z = &a[(i, j % m)];
        let part = if j < m { &z.re } else { &z.im };
        round_to_integer(&Float::with_val(bits, part * &c))
    })
}

/// Integer vectors `v` with ‖v·A‖∞ < 10^(−scale/2), found by LLL on
/// `[I | round(10^scale·Re A) | round(10^scale·Im A)]`.
///
/// The reduction is run in passes of increasing scale; each pass starts
/// from the previous transform, so the last pass reduces exactly the
/// lattice above. Every returned vector is re-checked against `A`, and
/// must also vanish to roundoff level (‖v‖₁·max|A|·10^(5−prec)); this
/// rejects the balanced near-relations LLL produces once the true
/// kernel is exhausted.
pub fn integer_kernel(a: &CMatrix, prec: u32, scale: u32) -> IMatrix {
    assert!(prec >= MIN_DIGITS, "precision below {MIN_DIGITS} digits");
    assert!(a.cols() >= 1, "need at least one column");
    assert!(a.prec() >= digits_to_bits(prec).saturating_sub(32), "matrix precision below requested digits");
    let n = a.rows();
    let delta = default_delta();
    let mut t = IMatrix::identity(n);
    let mut stages: Vec<u32> = (1..).map(|k| k * STAGE_DIGITS).take_while(|&s| s < scale).collect();
    stages.push(scale);
    for s in stages {
        let scaled = scaled_real_parts(a, s);
        let tail = t.mul(&scaled);
        let basis = IMatrix::from_fn(n, n + tail.cols(), |i, j| {
            if j < n {
                t[(i, j)].clone()
            } else {
                tail[(i, j - n)].clone()
            }
        });
        let gram = basis.mul(&basis.transpose());
        let (step, _) = lll_gram(&gram, &delta);
        t = step.mul(&t);
    }
    let bits = a.prec();
    let bound = ten_pow_neg((scale / 2) as i32, bits);
    let amax = Float::with_val(bits, a.max_abs().max(&Float::with_val(bits, 1)));
    let roundoff = Float::with_val(bits, &amax * ten_pow_neg(prec as i32 - 5, bits));
    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            let res = relation_residual(t.row(i), a);
            let l1 = t.row(i).iter().fold(Integer::new(), |acc, x| acc + x.clone().abs());
            res < bound && res <= Float::with_val(bits, &roundoff * &l1)
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    t.submatrix(&keep, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Matrix;

    const PREC: u32 = 60;

    fn column(vals: Vec<HPComplex>) -> CMatrix {
        let n = vals.len();
        Matrix::from_vec(n, 1, vals)
    }

    #[test]
    fn opposite_entries_give_sum_relation() {
        let bits = digits_to_bits(PREC);
        let a = column(vec![HPComplex::from_i64(1, 0, bits), HPComplex::from_i64(-1, 0, bits)]);
        let k = integer_kernel(&a, PREC, PREC - 10);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0)[0].clone().abs(), 1);
        assert_eq!(k.row(0)[0], k.row(0)[1]);
    }

    #[test]
    fn one_and_i_are_independent() {
        let bits = digits_to_bits(PREC);
        let a = column(vec![HPComplex::from_i64(1, 0, bits), HPComplex::i(bits)]);
        assert_eq!(integer_kernel(&a, PREC, PREC - 10).rows(), 0);
    }

    #[test]
    fn golden_ratio_relation() {
        let bits = digits_to_bits(PREC);
        let phi = (Float::with_val(bits, 5).sqrt() + 1u32) / 2u32;
        let phi2 = Float::with_val(bits, phi.square_ref());
        let a = column(vec![
            HPComplex::from_i64(1, 0, bits),
            HPComplex::from_real(phi),
            HPComplex::from_real(phi2),
        ]);
        let scale = PREC - 10;
        let k = integer_kernel(&a, PREC, scale);
        assert_eq!(k.rows(), 1);
        let v: Vec<i64> = k.row(0).iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == [1, 1, -1] || v == [-1, -1, 1], "{v:?}");
        assert!(relation_residual(k.row(0), &a) < ten_pow_neg((scale / 2) as i32, bits));
    }
}
