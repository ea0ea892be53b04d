//! Prime-power fields built from the least irreducible polynomial.

/// Factor `q = p^k` with `p` prime; `None` if `q` is not a prime power.
pub(crate) fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut m, mut k) = (q, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`
/// (coefficients lowest degree first).
fn poly_rem(mut a: Vec<usize>, m: &[usize], p: usize) -> Vec<usize> {
    let d = m.len() - 1;
    while a.len() > d {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = a.len() - d;
        for (i, &c) in m[..d].iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - lead * c % p) % p;
        }
    }
    a
}

fn digits(mut v: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn monic(mut low: Vec<usize>) -> Vec<usize> {
    low.push(1);
    low
}

fn is_irreducible(f: &[usize], p: usize) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for v in 0..p.pow(d as u32) {
            let g = monic(digits(v, p, d));
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `k` over `F_p` that is least
/// in lexicographic order of `(c_{k-1}, ..., c_0)`.  Coefficients are
/// returned lowest degree first, including the leading 1.
pub fn least_irreducible(p: usize, k: usize) -> Vec<usize> {
    (0..p.pow(k as u32))
        .map(|v| monic(digits(v, p, k)))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Product of two field elements, each encoded as `sum c_i p^i` over the
/// polynomial basis `1, x, ..., x^{k-1}`.
pub(crate) fn gf_mul(a: usize, b: usize, p: usize, modulus: &[usize]) -> usize {
    let k = modulus.len() - 1;
    let (da, db) = (digits(a, p, k), digits(b, p, k));
    let mut prod = vec![0; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = poly_rem(prod, modulus, p);
    r.iter().rev().fold(0, |acc, &c| acc * p + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(256), Some((2, 8)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn gf4_multiplication() {
        let m = least_irreducible(2, 2);
        // x * x = x + 1
        assert_eq!(gf_mul(2, 2, 2, &m), 3);
        assert_eq!(gf_mul(3, 3, 2, &m), 2);
        assert_eq!(gf_mul(2, 3, 2, &m), 1);
    }
}
