//! Potentially-optimal selection shared by the 1-D and n-D solvers.

/// Target value the selected intervals must be able to undercut.
#[inline]
pub(crate) fn improvement_target(incumbent: f64, tolerance_phi: f64) -> f64 {
    incumbent - tolerance_phi * incumbent.abs().max(1e-12)
}

/// Indices of the potentially-optimal records.
///
/// Each record is `(half_width, center_value)`. A record qualifies when some
/// `K > 0` makes its Lipschitz lower bound `f_i - K w_i` the smallest among
/// all records and at most the improvement target. Records sharing a width
/// are compared only through the group minimum; every record tied at that
/// minimum is returned.
pub fn potentially_optimal(records: &[(f64, f64)], incumbent: f64, tolerance_phi: f64) -> Vec<usize> {
    if records.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        records[a]
            .0
            .total_cmp(&records[b].0)
            .then(records[a].1.total_cmp(&records[b].1))
            .then(a.cmp(&b))
    });
    // One point per distinct width: its minimum value.
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for &i in &order {
        let (w, f) = records[i];
        match groups.last() {
            Some(&(gw, _)) if gw == w => {}
            _ => groups.push((w, f)),
        }
    }
    let chosen = select_groups(&groups, improvement_target(incumbent, tolerance_phi));
    let mut out: Vec<usize> = order
        .into_iter()
        .filter(|&i| {
            let (w, f) = records[i];
            groups
                .binary_search_by(|g| g.0.total_cmp(&w))
                .map(|g| chosen[g] && groups[g].1 == f)
                .unwrap_or(false)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Hull scan over group minima sorted by strictly increasing width.
/// Returns a mask over `groups`.
pub(crate) fn select_groups(groups: &[(f64, f64)], target: f64) -> Vec<bool> {
    let g = groups.len();
    let mut chosen = vec![false; g];
    if g == 0 {
        return chosen;
    }
    // The widest group with the smallest value anchors the hull; narrower
    // groups would need K <= 0 to beat it.
    let mut start = 0;
    for (j, &(_, f)) in groups.iter().enumerate() {
        if f <= groups[start].1 {
            start = j;
        }
    }
    // Lower convex hull from `start` to the widest group, collinear points kept.
    let mut hull: Vec<usize> = Vec::with_capacity(g - start);
    for j in start..g {
        while hull.len() >= 2 {
            let a = groups[hull[hull.len() - 2]];
            let b = groups[hull[hull.len() - 1]];
            let c = groups[j];
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }
    for (pos, &j) in hull.iter().enumerate() {
        let (w, f) = groups[j];
        match hull.get(pos + 1) {
            None => chosen[j] = true,
            Some(&next) => {
                // Largest admissible K is the slope to the next hull vertex;
                // test f - K w <= target without dividing.
                let (wn, fn_) = groups[next];
                let dw = wn - w;
                let df = fn_ - f;
                if df > 0.0 && (f - target) * dw <= df * w {
                    chosen[j] = true;
                }
            }
        }
    }
    chosen
}
