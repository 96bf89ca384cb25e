/// Maximum-weight one-to-one assignment of rows to columns.
///
/// Returns, for each row, the matched column (or `None` when there are more
/// rows than columns). Hungarian algorithm on the negated, square-padded
/// matrix; ties resolve deterministically.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    let n = rows.max(cols);
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };

    // 1-based potentials formulation; p[j] is the row assigned to column j.
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut out = vec![None; rows];
    for j in 1..=n {
        let i = p[j];
        if i >= 1 && i <= rows && j <= cols {
            out[i - 1] = Some(j - 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn total(w: &[Vec<f64>], a: &[Option<usize>]) -> f64 {
        a.iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| w[i][j]))
            .sum()
    }

    /// Exhaustive search over injective row→column maps (rows may stay unmatched).
    fn brute(w: &[Vec<f64>]) -> f64 {
        fn go(w: &[Vec<f64>], i: usize, used: &mut Vec<bool>) -> f64 {
            if i == w.len() {
                return 0.0;
            }
            let mut best = go(w, i + 1, used);
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.max(w[i][j] + go(w, i + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        let cols = w.first().map_or(0, Vec::len);
        go(w, 0, &mut vec![false; cols])
    }

    #[test]
    fn small_cases() {
        let w = vec![vec![1.0, 0.0], vec![0.9, 0.1]];
        let a = max_weight_assignment(&w);
        assert_eq!(a, vec![Some(0), Some(1)]);
        let w = vec![vec![0.2, 0.9, 0.0]];
        assert_eq!(max_weight_assignment(&w), vec![Some(1)]);
        let w = vec![vec![0.2], vec![0.9], vec![0.5]];
        assert_eq!(max_weight_assignment(&w), vec![None, Some(0), None]);
        assert!(max_weight_assignment(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(0u32..100, 25)) {
            let w: Vec<Vec<f64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 5 + j] as f64 / 100.0).collect())
                .collect();
            let a = max_weight_assignment(&w);
            let mut seen = std::collections::HashSet::new();
            for j in a.iter().flatten() {
                prop_assert!(seen.insert(*j));
            }
            prop_assert!((total(&w, &a) - brute(&w)).abs() < 1e-9);
        }
    }
}
