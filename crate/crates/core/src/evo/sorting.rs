use super::{dominates, Individual, Population};
use crate::error::{Error, Result};

/// Fast non-dominated sort. Partitions the population into Pareto fronts,
/// assigns every member its front index as rank, and returns the fronts as
/// lists of member indices. Front 0 holds the members dominated by nobody.
pub fn fast_nondominated_sort(pop: &mut Population) -> Result<Vec<Vec<usize>>> {
    if !pop.all_evaluated() {
        return Err(Error::InvalidState(
            "cannot sort a population with unevaluated members".into(),
        ));
    }
    let n = pop.size();
    let objectives: Vec<&[f64]> = pop.members.iter().map(|m| m.objectives()).collect();

    // dominated_by[i]: indices i dominates; domination_count[i]: how many dominate i.
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(objectives[i], objectives[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(objectives[j], objectives[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            pop.members[i].rank = Some(fronts.len());
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// Crowding distance of every member of one front, in front order.
///
/// Per objective the front is sorted, the two extremes get +infinity and
/// interior members accumulate the normalized gap between their neighbors.
/// Fronts of size <= 2 are all +infinity; a zero objective range contributes
/// nothing.
pub fn crowding_distance(front: &[&Individual]) -> Result<Vec<f64>> {
    if front.is_empty() {
        return Err(Error::InvalidArgument("empty front".into()));
    }
    let len = front.len();
    if len <= 2 {
        return Ok(vec![f64::INFINITY; len]);
    }
    let n_obj = front[0].objectives().len();
    let mut distance = vec![0.0f64; len];
    let mut order: Vec<usize> = (0..len).collect();

    for m in 0..n_obj {
        order.sort_by(|&a, &b| {
            front[a].objectives()[m]
                .partial_cmp(&front[b].objectives()[m])
                .expect("objective values must not be NaN")
        });
        let fmin = front[order[0]].objectives()[m];
        let fmax = front[order[len - 1]].objectives()[m];
        distance[order[0]] = f64::INFINITY;
        distance[order[len - 1]] = f64::INFINITY;
        let range = fmax - fmin;
        if range <= 0.0 {
            continue;
        }
        for w in 1..len - 1 {
            let gap = front[order[w + 1]].objectives()[m] - front[order[w - 1]].objectives()[m];
            distance[order[w]] += gap / range;
        }
    }
    Ok(distance)
}

/// Assigns crowding distances to all members, computed within each front.
/// Requires ranks already assigned by [`fast_nondominated_sort`].
pub fn assign_crowding(pop: &mut Population, fronts: &[Vec<usize>]) -> Result<()> {
    for front_indices in fronts {
        let front: Vec<&Individual> = front_indices.iter().map(|&i| &pop.members[i]).collect();
        let dist = crowding_distance(&front)?;
        for (&i, d) in front_indices.iter().zip(dist) {
            pop.members[i].crowding = Some(d);
        }
    }
    Ok(())
}
