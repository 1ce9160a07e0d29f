//! Satake-parameter combinatorics for unramified representations: the
//! almost-tempered chain partition and the accessible refinements, which
//! are the orderings putting x before x/q within every chain.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// An eigenvalue u q^exp with |u| = 1, encoded as (tag, exponent);
/// equality is componentwise and x/x' = q means equal tags with exponents
/// differing by one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SatakeEigenvalue {
    pub tag: String,
    pub exp: BigRational,
}

#[derive(Clone, Debug)]
pub struct UnramifiedSpectrum {
    /// Kept as given; orderings refer to positions in this list.
    pub x: Vec<SatakeEigenvalue>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainPartition {
    /// Blocks of element positions, each a maximal q-chain listed by
    /// decreasing exponent.
    pub blocks: Vec<Vec<usize>>,
}

impl UnramifiedSpectrum {
    pub fn new(x: Vec<SatakeEigenvalue>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Shape("empty spectrum".into()));
        }
        Ok(UnramifiedSpectrum { x })
    }

    /// The partition into maximal q-chains (greedy longest chain first),
    /// present exactly when every chain is an exact q-string and all
    /// chain-average exponents agree.
    pub fn almost_tempered_partition(&self) -> Result<ChainPartition> {
        // group positions by tag
        let mut by_tag: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
        for (i, e) in self.x.iter().enumerate() {
            by_tag.entry(&e.tag).or_default().push(i);
        }
        let one = BigRational::from_integer(1.into());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (_, mut positions) in by_tag {
            // repeatedly extract the longest chain of consecutive
            // exponents starting from the largest available
            positions.sort_by(|&a, &b| self.x[b].exp.cmp(&self.x[a].exp));
            while !positions.is_empty() {
                let mut chain = vec![positions.remove(0)];
                loop {
                    let last_exp = &self.x[*chain.last().unwrap()].exp;
                    let want = last_exp - &one;
                    match positions
                        .iter()
                        .position(|&p| self.x[p].exp == want)
                    {
                        Some(idx) => chain.push(positions.remove(idx)),
                        None => break,
                    }
                }
                blocks.push(chain);
            }
        }
        // (AT2): all chain averages equal
        let avg = |chain: &[usize]| -> BigRational {
            let sum: BigRational = chain
                .iter()
                .map(|&p| self.x[p].exp.clone())
                .fold(BigRational::zero(), |a, b| a + b);
            sum / BigRational::from_integer((chain.len() as i64).into())
        };
        let a0 = avg(&blocks[0]);
        for b in &blocks[1..] {
            if avg(b) != a0 {
                return Err(Error::NotAlmostTempered(format!(
                    "chain averages differ: {} vs {}",
                    a0,
                    avg(b)
                )));
            }
        }
        blocks.sort();
        Ok(ChainPartition { blocks })
    }

    /// All orderings (as position sequences) with x before x/q inside
    /// every chain; within a chain the order is forced to decreasing
    /// exponents, so these are the block interleavings.
    pub fn accessible_refinements(&self) -> Result<Vec<Vec<usize>>> {
        let part = self.almost_tempered_partition()?;
        let m = self.x.len();
        let mut out = Vec::new();
        let mut progress = vec![0usize; part.blocks.len()];
        let mut cur: Vec<usize> = Vec::with_capacity(m);
        fn go(
            blocks: &[Vec<usize>],
            progress: &mut Vec<usize>,
            cur: &mut Vec<usize>,
            m: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == m {
                out.push(cur.clone());
                return;
            }
            for b in 0..blocks.len() {
                if progress[b] < blocks[b].len() {
                    cur.push(blocks[b][progress[b]]);
                    progress[b] += 1;
                    go(blocks, progress, cur, m, out);
                    progress[b] -= 1;
                    cur.pop();
                }
            }
        }
        go(&part.blocks, &mut progress, &mut cur, m, &mut out);
        out.sort();
        Ok(out)
    }

    /// m! / prod m_i! as an exact integer.
    pub fn accessible_count(&self) -> Result<u128> {
        let part = self.almost_tempered_partition()?;
        let m = self.x.len() as u128;
        let mut num: u128 = 1;
        for k in 2..=m {
            num = num.checked_mul(k).ok_or(Error::Internal("count overflow".into()))?;
        }
        for b in &part.blocks {
            let mut den: u128 = 1;
            for k in 2..=(b.len() as u128) {
                den *= k;
            }
            num /= den;
        }
        Ok(num)
    }
}

/// The spectrum of the n-th symmetric-power-style family used in the
/// examples: one chain {1, q^{-1}} plus n distinct tempered eigenvalues.
pub fn pi_n_spectrum(n: usize) -> UnramifiedSpectrum {
    let mut x = vec![
        SatakeEigenvalue {
            tag: "u0".into(),
            exp: BigRational::from_integer(0.into()),
        },
        SatakeEigenvalue {
            tag: "u0".into(),
            exp: BigRational::from_integer((-1).into()),
        },
    ];
    for i in 0..n {
        x.push(SatakeEigenvalue {
            tag: format!("w{i}"),
            exp: BigRational::new((-1).into(), 2.into()),
        });
    }
    UnramifiedSpectrum::new(x).unwrap()
}

/// The spectrum of the trivial representation: the single chain
/// q^{(m-1)/2}, ..., q^{-(m-1)/2}.
pub fn trivial_spectrum(m: usize) -> UnramifiedSpectrum {
    let x = (0..m)
        .map(|i| SatakeEigenvalue {
            tag: "u".into(),
            exp: BigRational::new(((m as i64 - 1) - 2 * i as i64).into(), 2.into()),
        })
        .collect();
    UnramifiedSpectrum::new(x).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation_has_one_refinement() {
        for m in 1..=6 {
            let x = trivial_spectrum(m);
            let refs = x.accessible_refinements().unwrap();
            assert_eq!(refs.len(), 1);
            assert_eq!(x.accessible_count().unwrap(), 1);
            // the unique ordering is by decreasing exponent
            let r = &refs[0];
            for w in r.windows(2) {
                assert!(x.x[w[0]].exp > x.x[w[1]].exp);
            }
        }
    }

    #[test]
    fn tempered_spectrum_is_unconstrained() {
        let x = UnramifiedSpectrum::new(
            (0..4)
                .map(|i| SatakeEigenvalue {
                    tag: format!("u{i}"),
                    exp: BigRational::from_integer(0.into()),
                })
                .collect(),
        )
        .unwrap();
        let part = x.almost_tempered_partition().unwrap();
        assert_eq!(part.blocks.len(), 4);
        assert_eq!(x.accessible_refinements().unwrap().len(), 24);
    }

    #[test]
    fn unequal_chain_averages_are_rejected() {
        let x = UnramifiedSpectrum::new(vec![
            SatakeEigenvalue {
                tag: "a".into(),
                exp: BigRational::from_integer(1.into()),
            },
            SatakeEigenvalue {
                tag: "b".into(),
                exp: BigRational::from_integer(0.into()),
            },
        ])
        .unwrap();
        assert!(matches!(
            x.almost_tempered_partition(),
            Err(Error::NotAlmostTempered(_))
        ));
    }

    #[test]
    fn half_exponent_chain_orders_q_half_first() {
        // X = {q^{1/2}, q^{-1/2}, u}: accessible orderings put q^{1/2}
        // before q^{-1/2}
        let x = UnramifiedSpectrum::new(vec![
            SatakeEigenvalue {
                tag: "a".into(),
                exp: BigRational::new(1.into(), 2.into()),
            },
            SatakeEigenvalue {
                tag: "a".into(),
                exp: BigRational::new((-1).into(), 2.into()),
            },
            SatakeEigenvalue {
                tag: "u".into(),
                exp: BigRational::from_integer(0.into()),
            },
        ])
        .unwrap();
        let refs = x.accessible_refinements().unwrap();
        assert_eq!(refs.len(), 3);
        for r in refs {
            let pos_hi = r.iter().position(|&p| p == 0).unwrap();
            let pos_lo = r.iter().position(|&p| p == 1).unwrap();
            assert!(pos_hi < pos_lo);
        }
    }

    #[test]
    fn pi_n_counts() {
        assert_eq!(pi_n_spectrum(1).accessible_count().unwrap(), 3);
        assert_eq!(pi_n_spectrum(2).accessible_count().unwrap(), 12);
        for n in 1..=4 {
            let x = pi_n_spectrum(n);
            let count = x.accessible_refinements().unwrap().len() as u128;
            assert_eq!(count, x.accessible_count().unwrap());
            // n! (n+1)(n+2)/2
            let mut nf: u128 = 1;
            for k in 2..=n as u128 {
                nf *= k;
            }
            assert_eq!(count, nf * ((n as u128 + 1) * (n as u128 + 2) / 2));
        }
    }
}
