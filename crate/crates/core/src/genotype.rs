use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A candidate solution: a bit string (knapsack, NK landscape) or a
/// permutation (TSP tour, QAP assignment).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Genotype {
    BitString(Vec<bool>),
    Permutation(Vec<usize>),
}

/// Which of the two encodings a problem family uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    BitString,
    Permutation,
}

impl Genotype {
    pub fn len(&self) -> usize {
        match self {
            Genotype::BitString(bits) => bits.len(),
            Genotype::Permutation(order) => order.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encoding(&self) -> Encoding {
        match self {
            Genotype::BitString(_) => Encoding::BitString,
            Genotype::Permutation(_) => Encoding::Permutation,
        }
    }

    pub fn as_bits(&self) -> Option<&[bool]> {
        match self {
            Genotype::BitString(bits) => Some(bits),
            Genotype::Permutation(_) => None,
        }
    }

    pub fn as_permutation(&self) -> Option<&[usize]> {
        match self {
            Genotype::Permutation(order) => Some(order),
            Genotype::BitString(_) => None,
        }
    }

    /// Parses the textual form produced by `Display`: a `0`/`1` string for
    /// bit strings, space-separated indices for permutations.
    pub fn parse(text: &str, encoding: Encoding) -> Result<Self> {
        let text = text.trim();
        match encoding {
            Encoding::BitString => text
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::EncodingMismatch),
                })
                .collect::<Result<Vec<bool>>>()
                .map(Genotype::BitString),
            Encoding::Permutation => {
                let order = text
                    .split_whitespace()
                    .map(|tok| tok.parse::<usize>().map_err(|_| Error::EncodingMismatch))
                    .collect::<Result<Vec<usize>>>()?;
                if !is_permutation(&order) {
                    return Err(Error::InvalidPermutation);
                }
                Ok(Genotype::Permutation(order))
            }
        }
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genotype::BitString(bits) => {
                for &b in bits {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
            Genotype::Permutation(order) => {
                for (i, v) in order.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// `true` iff `order` is a bijection on `0..order.len()`.
pub fn is_permutation(order: &[usize]) -> bool {
    let mut seen = alloc::vec![false; order.len()];
    for &v in order {
        if v >= order.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Rotation of a tour that puts city 0 first. Tours are cyclic, so this is
/// only a canonical form for comparing tours, it has no effect on cost.
pub fn canonical_tour(tour: &[usize]) -> Vec<usize> {
    match tour.iter().position(|&c| c == 0) {
        Some(start) => tour[start..].iter().chain(&tour[..start]).copied().collect(),
        None => tour.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn display_and_parse() {
        let g = Genotype::BitString(vec![true, false, true]);
        assert_eq!(g.to_string(), "101");
        assert_eq!(Genotype::parse("101", Encoding::BitString).unwrap(), g);

        let p = Genotype::Permutation(vec![2, 0, 1]);
        assert_eq!(p.to_string(), "2 0 1");
        assert_eq!(Genotype::parse(" 2 0 1 ", Encoding::Permutation).unwrap(), p);
        assert_eq!(Genotype::parse("0 0 1", Encoding::Permutation), Err(Error::InvalidPermutation));
        assert_eq!(Genotype::parse("10x", Encoding::BitString), Err(Error::EncodingMismatch));
    }

    #[test]
    fn permutation_check() {
        assert!(is_permutation(&[1, 0, 2]));
        assert!(!is_permutation(&[1, 1, 2]));
        assert!(!is_permutation(&[0, 3, 1]));
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_tour(&[3, 1, 0, 2]), vec![0, 2, 3, 1]);
        assert_eq!(canonical_tour(&[0, 1, 2]), vec![0, 1, 2]);
    }
}
