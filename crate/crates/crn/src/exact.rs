//! Exact rational vectors and small dense linear algebra over the rationals.
//!
//! Everything combinatorial in this crate (orthogonality, maximality under a
//! direction, ranks, null spaces) is decided here with [`BigRational`]
//! arithmetic so that ties are meaningful. Floating point only enters at the
//! kinetics boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for complex coordinates and rate constants.
pub type Rat = BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q` in lowest terms, or plain `p` for integers.
pub fn render(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a non-negative decimal literal (`"2"`, `"1.5"`, `"0.25"`) exactly.
pub fn parse_decimal(text: &str) -> Option<Rat> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return None;
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().ok()?
    };
    let mut denom = BigInt::one();
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Some(Rat::new(numer, denom))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

/// Exact parallelism test: `a ∥ b` iff all 2x2 minors vanish (zero vectors are
/// parallel to everything).
pub fn parallel(a: &[Rat], b: &[Rat]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// Clears denominators, divides by the content, and makes the first nonzero
/// entry positive. The canonical representative of a rational ray.
pub fn canonical_ray(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = num_integer::gcd(gcd, x.clone());
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { -1 } else { 1 })
        .unwrap_or(1);
    ints.iter()
        .map(|x| Rat::from_integer(x / &gcd * sign))
        .collect()
}

/// Reduced row echelon form in place; returns the rank.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut m)
}

/// Canonical basis of the row space: the nonzero rows of the RREF.
pub fn row_space_basis(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut m);
    m
}

/// Basis of `{w : row · w = 0 for every row}`, canonicalized entrywise.
pub fn null_space(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    if m.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vec![Rat::zero(); dim];
                e[i] = Rat::one();
                e
            })
            .collect();
    }
    let rank = rref(&mut m);
    let mut pivot_cols = Vec::with_capacity(rank);
    for row in &m {
        if let Some(col) = row.iter().position(|x| !x.is_zero()) {
            pivot_cols.push(col);
        }
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(canonical_ray(&v));
    }
    basis
}

/// Whether `v` lies in the span of `basis` (any spanning set).
pub fn in_span(basis: &[Vec<Rat>], v: &[Rat]) -> bool {
    let mut m: Vec<Vec<Rat>> = basis.to_vec();
    let r0 = rref(&mut m);
    m.push(v.to_vec());
    rref(&mut m) == r0
}

/// Decides whether the span of `basis` meets the strictly positive orthant,
/// i.e. whether some combination `Σ λ_j basis_j ≥ 1` holds componentwise
/// (scaling makes `> 0` and `≥ 1` equivalent). Fourier–Motzkin elimination on
/// the coefficients `λ`; exact, and cheap at the dimensions seen here.
pub fn span_meets_positive_orthant(basis: &[Vec<Rat>], dim: usize) -> bool {
    if basis.is_empty() {
        return false;
    }
    // Constraints: for each coordinate i, Σ_j basis[j][i] λ_j ≥ 1.
    let nvars = basis.len();
    let mut constraints: Vec<(Vec<Rat>, Rat)> = (0..dim)
        .map(|i| {
            let coeffs: Vec<Rat> = (0..nvars).map(|j| basis[j][i].clone()).collect();
            (coeffs, Rat::one())
        })
        .collect();
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (coeffs, rhs) in constraints {
            let c = coeffs[var].clone();
            if c.is_zero() {
                zero.push((coeffs, rhs));
            } else if c.is_positive() {
                pos.push((coeffs, rhs, c));
            } else {
                neg.push((coeffs, rhs, c));
            }
        }
        // λ_var ≥ (rhs - rest)/c for positive c: always satisfiable upward, so
        // constraints with only one sign vanish; mixed signs pair up.
        let mut next = zero;
        for (pc, pr, pcoef) in &pos {
            for (nc, nr, ncoef) in &neg {
                let mut combined = vec![Rat::zero(); nvars];
                for k in 0..nvars {
                    if k == var {
                        continue;
                    }
                    combined[k] = &pc[k] * (-ncoef) + &nc[k] * pcoef;
                }
                let rhs = pr * (-ncoef) + nr * pcoef;
                next.push((combined, rhs));
            }
        }
        constraints = next;
    }
    constraints.iter().all(|(_, rhs)| !rhs.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("1.5").unwrap(), ratio(3, 2));
        assert_eq!(parse_decimal("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_decimal("2").unwrap(), int(2));
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("-1").is_none());
    }

    #[test]
    fn rank_and_null_space() {
        let rows = vec![v(&[-1, 1, 0]), v(&[0, -1, 1]), v(&[1, 0, -1])];
        assert_eq!(rank(&rows), 2);
        let ns = null_space(&rows, 3);
        assert_eq!(ns, vec![v(&[1, 1, 1])]);
    }

    #[test]
    fn null_space_of_empty_matrix_is_everything() {
        let ns = null_space(&[], 2);
        assert_eq!(ns.len(), 2);
    }

    #[test]
    fn span_membership() {
        let basis = vec![v(&[1, 0, -1]), v(&[0, 1, -1])];
        assert!(in_span(&basis, &v(&[1, 1, -2])));
        assert!(!in_span(&basis, &v(&[1, 1, 1])));
    }

    #[test]
    fn positive_orthant_detection() {
        // span{(1,1,1)} meets the positive orthant; span{(1,-1)} does not.
        assert!(span_meets_positive_orthant(&[v(&[1, 1, 1])], 3));
        assert!(!span_meets_positive_orthant(&[v(&[1, -1])], 2));
        // Two generators that only jointly produce a positive vector.
        assert!(span_meets_positive_orthant(
            &[v(&[2, -1, 0]), v(&[-1, 2, 3])],
            3
        ));
        // A zero coordinate everywhere can never become positive.
        assert!(!span_meets_positive_orthant(&[v(&[0, 1, 1])], 3));
    }

    #[test]
    fn parallel_vectors() {
        assert!(parallel(&v(&[1, -1, 0]), &v(&[-2, 2, 0])));
        assert!(!parallel(&v(&[1, -1, 0]), &v(&[1, 1, 0])));
    }

    #[test]
    fn canonical_ray_normalizes() {
        let ray = canonical_ray(&[ratio(-1, 2), ratio(1, 4), Rat::zero()]);
        assert_eq!(ray, vec![int(2), int(-1), int(0)]);
    }
}
