//! Exact optimal transport between small discrete measures.

/// Minimum-cost perfect matching on a dense `n × n` cost matrix
/// (Hungarian method with row potentials, O(n³)).
///
/// Returns `assignment[row] = column`.
pub fn min_cost_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(cost.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    let c = |i: usize, j: usize| cost[(i - 1) * n + (j - 1)];
    // 1-based: column 0 is a virtual start, p[j] is the row matched to column j
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = c(i0, j) - u[i0] - v[j];
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
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    assignment
}

/// Masses below this are treated as exhausted.
const MASS_EPS: f64 = 1e-15;

/// Optimal transport cost between supplies `a` (rows) and demands `b`
/// (columns) under a dense `a.len() × b.len()` cost matrix.
///
/// Successive shortest augmenting paths with Johnson potentials on the
/// residual bipartite network. `b` is rescaled to the total of `a`.
pub fn transport_cost(a: &[f64], b: &[f64], cost: &[f64]) -> f64 {
    let (n, m) = (a.len(), b.len());
    assert_eq!(cost.len(), n * m);
    let total_a: f64 = a.iter().sum();
    let total_b: f64 = b.iter().sum();
    if n == 0 || m == 0 || total_a <= 0.0 {
        return 0.0;
    }
    let mut supply = a.to_vec();
    let mut demand: Vec<f64> = b.iter().map(|v| v * total_a / total_b).collect();
    let mut flow = vec![0.0f64; n * m];
    let mut pot_s = vec![0.0f64; n];
    let mut pot_t = vec![0.0f64; m];

    let mut dist_s = vec![0.0f64; n];
    let mut dist_t = vec![0.0f64; m];
    // predecessor of sink j is a source; predecessor of a source is a sink (or none)
    let mut pred_t = vec![usize::MAX; m];
    let mut pred_s = vec![usize::MAX; n];
    let mut done_s = vec![false; n];
    let mut done_t = vec![false; m];

    loop {
        let remaining: f64 = supply.iter().filter(|s| **s > MASS_EPS).sum();
        if remaining <= MASS_EPS * n as f64 {
            break;
        }
        dist_s.iter_mut().zip(&supply).for_each(|(d, s)| *d = if *s > MASS_EPS { 0.0 } else { f64::INFINITY });
        dist_t.fill(f64::INFINITY);
        pred_s.fill(usize::MAX);
        pred_t.fill(usize::MAX);
        done_s.fill(false);
        done_t.fill(false);

        // dense Dijkstra over n + m nodes
        loop {
            let mut best = f64::INFINITY;
            let mut pick: Option<(bool, usize)> = None;
            for i in 0..n {
                if !done_s[i] && dist_s[i] < best {
                    best = dist_s[i];
                    pick = Some((true, i));
                }
            }
            for j in 0..m {
                if !done_t[j] && dist_t[j] < best {
                    best = dist_t[j];
                    pick = Some((false, j));
                }
            }
            let Some((is_source, k)) = pick else { break };
            if is_source {
                done_s[k] = true;
                let row = &cost[k * m..(k + 1) * m];
                for j in 0..m {
                    if done_t[j] {
                        continue;
                    }
                    let rc = (row[j] + pot_s[k] - pot_t[j]).max(0.0);
                    let nd = best + rc;
                    if nd < dist_t[j] {
                        dist_t[j] = nd;
                        pred_t[j] = k;
                    }
                }
            } else {
                done_t[k] = true;
                for i in 0..n {
                    if done_s[i] || flow[i * m + k] <= MASS_EPS {
                        continue;
                    }
                    let rc = (-cost[i * m + k] + pot_t[k] - pot_s[i]).max(0.0);
                    let nd = best + rc;
                    if nd < dist_s[i] {
                        dist_s[i] = nd;
                        pred_s[i] = k;
                    }
                }
            }
        }

        // closest sink with unmet demand
        let Some(target) = (0..m)
            .filter(|&j| demand[j] > MASS_EPS && dist_t[j].is_finite())
            .min_by(|&x, &y| dist_t[x].total_cmp(&dist_t[y]))
        else {
            break;
        };
        let reach = dist_t[target];

        // bottleneck along the path
        let mut delta = demand[target];
        let mut j = target;
        let origin = loop {
            let i = pred_t[j];
            match pred_s[i] {
                usize::MAX => break i,
                jj => {
                    delta = delta.min(flow[i * m + jj]);
                    j = jj;
                }
            }
        };
        delta = delta.min(supply[origin]);

        let mut j = target;
        loop {
            let i = pred_t[j];
            flow[i * m + j] += delta;
            match pred_s[i] {
                usize::MAX => break,
                jj => {
                    flow[i * m + jj] -= delta;
                    j = jj;
                }
            }
        }
        supply[origin] -= delta;
        demand[target] -= delta;

        for i in 0..n {
            pot_s[i] += dist_s[i].min(reach);
        }
        for j in 0..m {
            pot_t[j] += dist_t[j].min(reach);
        }
    }

    flow.iter().zip(cost).filter(|(f, _)| **f > 0.0).map(|(f, c)| f * c).sum()
}
