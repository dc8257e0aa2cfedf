//! Self-maps of `{0, .., n-1}` and their idempotent powers.

use alloc::vec;
use alloc::vec::Vec;

/// `f ∘ g`, that is `x ↦ f(g(x))`.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

/// `f^k` by `k` literal compositions (`f^0` is the identity).
pub fn compose_power(f: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..f.len()).collect();
    for _ in 0..k {
        out = compose(f, &out);
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn is_idempotent_map(f: &[usize]) -> bool {
    f.iter().all(|&y| f[y] == y)
}

/// The unique idempotent in `{f, f^2, f^3, ..}`, equal to `f^{n!}`.
///
/// The idempotent is `f^k` for any `k` at least every tail length that is a
/// multiple of every cycle length. Per point `x` with tail `t` entering its
/// cycle (length `c`) at `z`, that is `f^{(-t) mod c}(z)`.
pub fn idempotent_power(f: &[usize]) -> Vec<usize> {
    let n = f.len();
    let mut out = vec![0; n];
    let mut seen = vec![usize::MAX; n];
    for x in 0..n {
        // walk until a point repeats; stamp positions with the walk length
        let mut path = Vec::new();
        let mut y = x;
        while seen[y] != x {
            seen[y] = x;
            path.push(y);
            y = f[y];
        }
        let entry = path.iter().position(|&p| p == y).expect("repeated point is on the path");
        let (tail, cycle) = (entry, path.len() - entry);
        let shift = (cycle - tail % cycle) % cycle;
        out[x] = path[entry + shift];
    }
    out
}
