use super::sorting::{assign_crowding, fast_nondominated_sort};
use super::Population;
use crate::error::{Error, Result};
use rand::Rng;

/// NSGA-II style environmental selection: keep whole fronts in rank order
/// until the next front would overflow `d`, then fill the remainder from that
/// front by descending crowding distance, ties broken by lower member index.
///
/// The returned population has size exactly `d`, carries the input's
/// `fe_count`, and has rank and crowding reassigned relative to the survivors.
pub fn environmental_selection(mut pop: Population, d: usize) -> Result<Population> {
    if pop.size() < d {
        return Err(Error::InvalidArgument(format!(
            "cannot select {d} from a population of {}",
            pop.size()
        )));
    }
    let fronts = fast_nondominated_sort(&mut pop)?;
    assign_crowding(&mut pop, &fronts)?;

    let mut keep: Vec<usize> = Vec::with_capacity(d);
    for front in &fronts {
        if keep.len() + front.len() <= d {
            keep.extend_from_slice(front);
            if keep.len() == d {
                break;
            }
        } else {
            let mut by_crowding = front.clone();
            by_crowding.sort_by(|&a, &b| {
                let ca = pop.members[a].crowding.unwrap();
                let cb = pop.members[b].crowding.unwrap();
                cb.partial_cmp(&ca).unwrap().then(a.cmp(&b))
            });
            keep.extend(by_crowding.into_iter().take(d - keep.len()));
            break;
        }
    }
    keep.sort_unstable();

    let mut survivors = Population::new(keep.into_iter().map(|i| pop.members[i].clone()).collect());
    survivors.fe_count = pop.fe_count;
    let fronts = fast_nondominated_sort(&mut survivors)?;
    assign_crowding(&mut survivors, &fronts)?;
    Ok(survivors)
}

/// Binary tournament on (rank ascending, crowding descending). Draws two
/// member indices and returns the better one; exact ties keep the first draw.
/// Requires ranks and crowding assigned.
pub fn tournament_select<R: Rng>(pop: &Population, rng: &mut R) -> usize {
    let a = rng.gen_range(0..pop.size());
    let b = rng.gen_range(0..pop.size());
    let ma = &pop.members[a];
    let mb = &pop.members[b];
    let ra = ma.rank.expect("tournament requires ranks");
    let rb = mb.rank.expect("tournament requires ranks");
    if rb < ra {
        return b;
    }
    if ra == rb {
        let ca = ma.crowding.expect("tournament requires crowding");
        let cb = mb.crowding.expect("tournament requires crowding");
        if cb > ca {
            return b;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::Individual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pop_from_objectives(objs: &[Vec<f64>]) -> Population {
        let members = objs
            .iter()
            .map(|f| {
                let mut ind = Individual::new(f.clone());
                ind.f = Some(f.clone());
                ind
            })
            .collect();
        Population::new(members)
    }

    #[test]
    fn no_truncation_keeps_everything() {
        let objs = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]];
        let pop = pop_from_objectives(&objs);
        let out = environmental_selection(pop, 3).unwrap();
        let mut got: Vec<Vec<f64>> = out.members.iter().map(|m| m.x.clone()).collect();
        let mut want = objs;
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn crowding_truncation_keeps_extremes() {
        // One front of three; the middle member has finite crowding and is cut.
        let pop = pop_from_objectives(&[vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]]);
        let out = environmental_selection(pop, 2).unwrap();
        let mut firsts: Vec<f64> = out.members.iter().map(|m| m.objectives()[0]).collect();
        firsts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(firsts, vec![0.0, 2.0]);
    }

    #[test]
    fn undersized_pool_rejected() {
        let pop = pop_from_objectives(&[vec![1.0, 1.0]]);
        assert!(matches!(
            environmental_selection(pop, 2),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn survivors_are_rank_prefix_of_pool() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..50 {
            let n = rng.gen_range(5..=40);
            let d = rng.gen_range(2..=n);
            let objs: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)])
                .collect();

            let mut pool = pop_from_objectives(&objs);
            let fronts = fast_nondominated_sort(&mut pool).unwrap();
            let pool_rank: Vec<usize> = pool.members.iter().map(|m| m.rank.unwrap()).collect();

            let out = environmental_selection(pop_from_objectives(&objs), d).unwrap();
            assert_eq!(out.size(), d);

            // Every survivor's pool rank must not exceed the rank of any
            // dropped member: survivors form a prefix of the rank ordering.
            let surviving: Vec<usize> = out
                .members
                .iter()
                .map(|m| objs.iter().position(|o| o == &m.x).unwrap())
                .collect();
            let max_kept = surviving.iter().map(|&i| pool_rank[i]).max().unwrap();
            for i in 0..n {
                if !surviving.contains(&i) {
                    assert!(
                        pool_rank[i] >= max_kept,
                        "dropped a rank-{} member while keeping rank {}",
                        pool_rank[i],
                        max_kept
                    );
                }
            }
            let _ = fronts;
        }
    }

    #[test]
    fn selection_is_deterministic() {
        let objs: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![(i % 7) as f64, (13 - i % 13) as f64])
            .collect();
        let a = environmental_selection(pop_from_objectives(&objs), 8).unwrap();
        let b = environmental_selection(pop_from_objectives(&objs), 8).unwrap();
        for (x, y) in a.members.iter().zip(&b.members) {
            assert_eq!(x.x, y.x);
        }
    }

    #[test]
    fn tournament_prefers_lower_rank() {
        let mut pop = pop_from_objectives(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
        let fronts = fast_nondominated_sort(&mut pop).unwrap();
        assign_crowding(&mut pop, &fronts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let w = tournament_select(&pop, &mut rng);
            // Member 0 dominates member 1, so member 1 may only win a
            // tournament against itself.
            if w == 1 {
                continue;
            }
            assert_eq!(pop.members[w].rank, Some(0));
        }
    }
}
