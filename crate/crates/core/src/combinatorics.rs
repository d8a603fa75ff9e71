//! Binomial coefficients and k-subsets in colexicographic order.

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        let num = num / d; // d divides num once acc's share is removed
        acc = match a.checked_mul(num) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Iterator over the `k`-subsets of `{0, .., n-1}` in colex order: subsets
/// are compared by their largest element first.
#[derive(Clone, Debug)]
pub struct ColexSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        ColexSubsets { n, current }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut advanced = false;
        for i in 0..k {
            let limit = if i + 1 < k { next[i + 1] } else { self.n };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, v) in next.iter_mut().enumerate().take(i) {
                    *v = j;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// Position of a sorted subset in colex order among subsets of its size.
pub fn colex_rank(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}
