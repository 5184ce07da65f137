use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// The `n`-th convergent `p_n / q_n` of a continued fraction `[0; a_1, a_2, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvergentOf<T> {
    pub n: usize,
    pub p: T,
    pub q: T,
}

/// One step of `p_n = a_n p_{n-1} + p_{n-2}` (and the same for `q`).
pub fn next_term<T: Integer + Clone>(a: &T, prev: &T, prev2: &T) -> T {
    a.clone() * prev.clone() + prev2.clone()
}

/// Convergents `0..=quotients.len()` from the seeds `p_{-1} = 1, q_{-1} = 0,
/// p_0 = 0, q_0 = 1`.
pub fn convergents_from<T: Integer + Clone>(quotients: &[T]) -> Vec<ConvergentOf<T>> {
    let mut out = Vec::with_capacity(quotients.len() + 1);
    let (mut p2, mut q2) = (T::one(), T::zero());
    let (mut p1, mut q1) = (T::zero(), T::one());
    out.push(ConvergentOf {
        n: 0,
        p: p1.clone(),
        q: q1.clone(),
    });
    for (i, a) in quotients.iter().enumerate() {
        let p = next_term(a, &p1, &p2);
        let q = next_term(a, &q1, &q2);
        out.push(ConvergentOf {
            n: i + 1,
            p: p.clone(),
            q: q.clone(),
        });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}
