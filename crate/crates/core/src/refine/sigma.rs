//! The block permutation matching eigenvalue indices to weight indices:
//! the unique bijection sending each R_i onto W_i increasingly, its
//! ordinary/anti-ordinary classification, the W_P != R_P criterion, and
//! the construction of orthogonal partitions.

use crate::error::{Error, Result};

/// Per block: its eigenvalue-index set R and weight-index set W (1-based
/// positions in {1..m}).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRefinementData {
    pub blocks: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaClass {
    Ordinary,
    AntiOrdinary,
    Neither,
}

#[derive(Clone, Debug)]
pub struct SigmaReport {
    /// sigma[i] = image of i+1, 1-based.
    pub sigma: Vec<usize>,
    pub class: SigmaClass,
    pub transitive: bool,
}

impl BlockRefinementData {
    pub fn new(blocks: Vec<(Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let m: usize = blocks.iter().map(|(r, _)| r.len()).sum();
        let mut seen_r = vec![false; m + 1];
        let mut seen_w = vec![false; m + 1];
        for (r, w) in &blocks {
            if r.len() != w.len() {
                return Err(Error::Shape(format!(
                    "block has |R| = {} but |W| = {}",
                    r.len(),
                    w.len()
                )));
            }
            for &x in r {
                if x == 0 || x > m || seen_r[x] {
                    return Err(Error::Shape("R sets must partition 1..m".into()));
                }
                seen_r[x] = true;
            }
            for &x in w {
                if x == 0 || x > m || seen_w[x] {
                    return Err(Error::Shape("W sets must partition 1..m".into()));
                }
                seen_w[x] = true;
            }
        }
        Ok(BlockRefinementData { blocks })
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().map(|(r, _)| r.len()).sum()
    }

    /// The unique bijection increasing on each R_i with sigma(R_i) = W_i.
    pub fn sigma(&self) -> SigmaReport {
        let m = self.m();
        let mut sigma = vec![0usize; m + 1];
        for (r, w) in &self.blocks {
            let mut r = r.clone();
            let mut w = w.clone();
            r.sort_unstable();
            w.sort_unstable();
            for (x, y) in r.iter().zip(&w) {
                sigma[*x] = *y;
            }
        }
        let sigma: Vec<usize> = sigma[1..].to_vec();
        // transitivity: a single m-cycle
        let mut len = 0;
        let mut cur = 1usize;
        loop {
            cur = sigma[cur - 1];
            len += 1;
            if cur == 1 {
                break;
            }
            if len > m {
                break;
            }
        }
        let transitive = len == m;
        let identity = sigma.iter().enumerate().all(|(i, &s)| s == i + 1);
        let all_singletons = self.blocks.iter().all(|(r, _)| r.len() == 1);
        let class = if all_singletons && identity {
            SigmaClass::Ordinary
        } else if transitive {
            SigmaClass::AntiOrdinary
        } else {
            SigmaClass::Neither
        };
        SigmaReport {
            sigma,
            class,
            transitive,
        }
    }

    /// For every proper nonempty sub-collection P of blocks, the union of
    /// the W_i over P differs from the union of the R_i over P.
    pub fn check_wp_neq_rp(&self) -> bool {
        let r = self.blocks.len();
        if r <= 1 {
            return true;
        }
        for mask in 1u64..(1 << r) - 1 {
            let mut wu: Vec<usize> = Vec::new();
            let mut ru: Vec<usize> = Vec::new();
            for (i, (rs, ws)) in self.blocks.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ru.extend(rs);
                    wu.extend(ws);
                }
            }
            wu.sort_unstable();
            ru.sort_unstable();
            if wu == ru {
                return false;
            }
        }
        true
    }
}

/// Build an R-partition orthogonal to the given W-partition: pick one
/// marker t_i from each W_i, spread them through a transitive block
/// permutation, and fill up the remaining slots. With `pin_ends`, blocks
/// 1 and r are singletons forced to R_1 = {1} and R_r = {m}.
pub fn orthogonal_partition(
    w_partition: &[Vec<usize>],
    pin_ends: bool,
) -> Result<BlockRefinementData> {
    let r = w_partition.len();
    let m: usize = w_partition.iter().map(|w| w.len()).sum();
    // validate W
    {
        let mut seen = vec![false; m + 1];
        for w in w_partition {
            if w.is_empty() {
                return Err(Error::Shape("empty W block".into()));
            }
            for &x in w {
                if x == 0 || x > m || seen[x] {
                    return Err(Error::Shape("W sets must partition 1..m".into()));
                }
                seen[x] = true;
            }
        }
    }
    if r == 1 {
        if pin_ends && m != 1 {
            return Err(Error::PinEndsInfeasible(
                "one block cannot pin both ends unless m = 1".into(),
            ));
        }
        return BlockRefinementData::new(vec![(
            (1..=m).collect(),
            w_partition[0].clone(),
        )]);
    }
    // choose markers and the transitive sigma on blocks
    let block_of = |x: usize| -> usize {
        w_partition
            .iter()
            .position(|w| w.contains(&x))
            .expect("partition covers 1..m")
    };
    let mut markers: Vec<usize> = w_partition.iter().map(|w| *w.iter().min().unwrap()).collect();
    let sigma: Vec<usize> = if pin_ends {
        if w_partition[0].len() != 1 || w_partition[r - 1].len() != 1 {
            return Err(Error::PinEndsInfeasible(
                "pinEnds needs singleton first and last blocks".into(),
            ));
        }
        let a = block_of(1);
        let b = block_of(m);
        markers[a] = 1;
        markers[b] = m;
        transitive_with(r, 0, a, r - 1, b).ok_or_else(|| {
            Error::PinEndsInfeasible(format!(
                "no transitive block permutation sends 1 -> {} and {} -> {}",
                a + 1,
                r,
                b + 1
            ))
        })?
    } else {
        // the cycle i -> i+1
        (0..r).map(|i| (i + 1) % r).collect()
    };
    // R_i gets the marker of block sigma(i), then fills greedily
    let sizes: Vec<usize> = w_partition.iter().map(|w| w.len()).collect();
    let mut r_parts: Vec<Vec<usize>> = (0..r).map(|i| vec![markers[sigma[i]]]).collect();
    if pin_ends {
        if r_parts[0] != vec![1] || r_parts[r - 1] != vec![m] {
            return Err(Error::PinEndsInfeasible(
                "marker assignment cannot satisfy the pinned ends".into(),
            ));
        }
    }
    let used: std::collections::BTreeSet<usize> = markers.iter().copied().collect();
    let mut rest: Vec<usize> = (1..=m).filter(|x| !used.contains(x)).collect();
    for (i, part) in r_parts.iter_mut().enumerate() {
        while part.len() < sizes[i] {
            let x = rest.pop().ok_or_else(|| Error::Internal("fill underflow".into()))?;
            part.push(x);
        }
        part.sort_unstable();
    }
    let data = BlockRefinementData::new(
        r_parts
            .into_iter()
            .zip(w_partition.iter().cloned())
            .collect(),
    )?;
    if !data.check_wp_neq_rp() {
        return Err(Error::Internal(
            "constructed partition is not orthogonal".into(),
        ));
    }
    Ok(data)
}

/// A single r-cycle sigma with sigma(p1) = v1 and sigma(p2) = v2, if one
/// exists (0-based).
fn transitive_with(r: usize, p1: usize, v1: usize, p2: usize, v2: usize) -> Option<Vec<usize>> {
    if r == 1 {
        return if p1 == v1 && p2 == v2 {
            Some(vec![0])
        } else {
            None
        };
    }
    // forced arcs p1 -> v1, p2 -> v2 must extend to a single cycle
    if p1 == p2 && v1 != v2 {
        return None;
    }
    let mut next = vec![usize::MAX; r];
    next[p1] = v1;
    next[p2] = v2;
    // reject premature cycles
    if v1 == p1 || v2 == p2 {
        return None;
    }
    if v1 == p2 && v2 == p1 && r > 2 {
        return None;
    }
    // chain the remaining vertices greedily: walk from arcs, connect loose
    // ends without closing early
    let mut have_out: Vec<bool> = next.iter().map(|&x| x != usize::MAX).collect();
    let mut have_in = vec![false; r];
    for &v in next.iter().filter(|&&x| x != usize::MAX) {
        if have_in[v] {
            return None;
        }
        have_in[v] = true;
    }
    // repeatedly attach a vertex without in-edge to a path end without
    // out-edge, avoiding closing a cycle before all vertices are used
    loop {
        let tail = (0..r).find(|&i| !have_out[i]);
        let tail = match tail {
            None => break,
            Some(t) => t,
        };
        // find the start of tail's path
        let path_start = {
            let mut s = tail;
            loop {
                let prevs: Vec<usize> = (0..r).filter(|&i| next[i] == s).collect();
                match prevs.first() {
                    Some(&p) => s = p,
                    None => break,
                }
            }
            s
        };
        // pick a head that is not this path's start unless it is the last
        // edge overall
        let remaining_edges = next.iter().filter(|&&x| x == usize::MAX).count();
        let head = (0..r)
            .find(|&j| !have_in[j] && (j != path_start || remaining_edges == 1))?;
        next[tail] = head;
        have_out[tail] = true;
        have_in[head] = true;
    }
    // verify single cycle
    let mut len = 0;
    let mut cur = 0;
    loop {
        cur = next[cur];
        len += 1;
        if cur == 0 {
            break;
        }
        if len > r {
            return None;
        }
    }
    if len == r {
        Some(next)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation_configuration() {
        // blocks R_i = {i}, W_i = {m+1-i}: sigma(i) = m+1-i
        for m in 3..=6 {
            let blocks: Vec<(Vec<usize>, Vec<usize>)> =
                (1..=m).map(|i| (vec![i], vec![m + 1 - i])).collect();
            let data = BlockRefinementData::new(blocks).unwrap();
            let rep = data.sigma();
            let expect: Vec<usize> = (1..=m).map(|i| m + 1 - i).collect();
            assert_eq!(rep.sigma, expect);
            assert_eq!(rep.transitive, m == 2);
        }
    }

    #[test]
    fn all_singletons_identity_is_ordinary() {
        let blocks: Vec<(Vec<usize>, Vec<usize>)> =
            (1..=4).map(|i| (vec![i], vec![i])).collect();
        let data = BlockRefinementData::new(blocks).unwrap();
        let rep = data.sigma();
        assert_eq!(rep.class, SigmaClass::Ordinary);
        assert!(!data.check_wp_neq_rp());
    }

    #[test]
    fn sigma_is_the_unique_increasing_matching() {
        // exhaustive uniqueness for small m: any other bijection R_i -> W_i
        // fails to be increasing on some block
        let data = BlockRefinementData::new(vec![
            (vec![1, 3], vec![2, 4]),
            (vec![2, 4], vec![1, 3]),
        ])
        .unwrap();
        let rep = data.sigma();
        assert_eq!(rep.sigma, vec![2, 1, 4, 3]);
        // brute force: all bijections preserving the block structure
        let mut count = 0;
        for perm in permutations(&[1, 2, 3, 4]) {
            let maps_blocks = {
                let s = |x: usize| perm[x - 1];
                let im1: Vec<usize> = {
                    let mut v = vec![s(1), s(3)];
                    v.sort_unstable();
                    v
                };
                let im2: Vec<usize> = {
                    let mut v = vec![s(2), s(4)];
                    v.sort_unstable();
                    v
                };
                im1 == vec![2, 4] && im2 == vec![1, 3]
            };
            let increasing = perm[0] < perm[2] && perm[1] < perm[3];
            if maps_blocks && increasing {
                count += 1;
                assert_eq!(perm, rep.sigma);
            }
        }
        assert_eq!(count, 1);
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        crate::pseudochar::identities::for_each_permutation(items.len(), |p| {
            out.push(p.iter().map(|&i| items[i]).collect());
        });
        out
    }

    #[test]
    fn orthogonal_partition_brute_check() {
        let w = vec![vec![2], vec![1, 3], vec![4]];
        let data = orthogonal_partition(&w, false).unwrap();
        assert!(data.check_wp_neq_rp());
    }

    #[test]
    fn pinned_ends_variant() {
        // W_r = {k}, W_1 = {k+1} with k = 2, m = 5
        let w = vec![vec![3], vec![1, 4], vec![5], vec![2]];
        let data = orthogonal_partition(&w, true).unwrap();
        assert_eq!(data.blocks[0].0, vec![1]);
        assert_eq!(data.blocks[3].0, vec![5]);
        assert!(data.check_wp_neq_rp());
    }

    #[test]
    fn pinned_ends_infeasible_when_first_block_is_big() {
        let w = vec![vec![1, 2], vec![3], vec![4]];
        assert!(matches!(
            orthogonal_partition(&w, true),
            Err(Error::PinEndsInfeasible(_))
        ));
    }

    #[test]
    fn transitive_sigma_implies_orthogonality() {
        // sigma = (1 2 3 4): whenever sigma is transitive, W_P != R_P for
        // all proper P
        let data = BlockRefinementData::new(vec![
            (vec![1], vec![2]),
            (vec![2, 3], vec![3, 4]),
            (vec![4], vec![1]),
        ])
        .unwrap();
        let rep = data.sigma();
        assert_eq!(rep.sigma, vec![2, 3, 4, 1]);
        assert!(rep.transitive);
        assert_eq!(rep.class, SigmaClass::AntiOrdinary);
        assert!(data.check_wp_neq_rp());
    }
}
