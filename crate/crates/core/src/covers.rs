//! Homomorphisms from surface groups and free groups into symmetric groups.
//!
//! The fundamental group of a genus-`g` curve with at least one puncture is
//! free on `α₁, β₁, …, α_g, β_g`; filling the punctures imposes the single
//! relation `∏ [αᵢ, βᵢ] = 1`. Counting assignments into `S_n` that satisfy the
//! relation, against all assignments, exhibits homomorphisms (hence finite
//! étale covers) that do not extend over the punctures.
//!
//! Composition is right to left: `(a ∘ b)(i) = a(b(i))`, and
//! `[a, b] = a ∘ b ∘ a⁻¹ ∘ b⁻¹`.

use std::collections::BTreeSet;
use std::fmt;

use crate::par::{self, Strategy};
use crate::{Error, Result};

pub const MAX_DEGREE: usize = 8;

/// Largest number of assignments `count_homs` will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// A permutation of `{1, …, n}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// From 1-based images `[σ(1), …, σ(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let distinct: BTreeSet<usize> = images.iter().copied().collect();
        if distinct.len() != n || images.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
        }
        Ok(Perm {
            images: images.iter().map(|&i| (i - 1) as u8).collect(),
        })
    }

    /// From disjoint or overlapping cycles in 1-based notation, composed
    /// right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut out = Perm::identity(n);
        for cycle in cycles.iter().rev() {
            if cycle.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidArgument(format!("cycle {cycle:?} outside 1..={n}")));
            }
            let mut images: Vec<usize> = (1..=n).collect();
            for (k, &i) in cycle.iter().enumerate() {
                images[i - 1] = cycle[(k + 1) % cycle.len()];
            }
            out = p_compose(&out, &Perm::from_images(&images)?)?;
        }
        Ok(out)
    }

    /// Parses `id` or cycle notation such as `(12)(34)`; points are single
    /// digits since `n ≤ 8`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text == "id" {
            return Ok(Perm::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        for (pos, ch) in text.char_indices() {
            match (ch, current.as_mut()) {
                ('(', None) => current = Some(Vec::new()),
                (')', Some(_)) => cycles.push(current.take().expect("open cycle")),
                (d, Some(cycle)) if d.is_ascii_digit() => {
                    cycle.push(d.to_digit(10).expect("digit") as usize)
                }
                (' ', _) => {}
                _ => return Err(Error::parse(pos, format!("unexpected `{ch}` in permutation"))),
            }
        }
        if current.is_some() {
            return Err(Error::parse(text.len(), "unclosed cycle"));
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(n, &refs).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::parse(0, m),
            e => e,
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u8;
        }
        Perm { images }
    }

    /// Cycles of length at least 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths (including fixed points) in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.extend(std::iter::repeat_n(1, self.degree() - moved));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for cycle in self.cycles() {
            f.write_str("(")?;
            for i in cycle {
                write!(f, "{i}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `a ∘ b`: apply `b` first.
pub fn p_compose(a: &Perm, b: &Perm) -> Result<Perm> {
    if a.degree() != b.degree() {
        return Err(Error::SizeMismatch(a.degree(), b.degree()));
    }
    Ok(Perm {
        images: b.images.iter().map(|&j| a.images[j as usize]).collect(),
    })
}

/// `[a, b] = a ∘ b ∘ a⁻¹ ∘ b⁻¹`.
pub fn commutator(a: &Perm, b: &Perm) -> Result<Perm> {
    let ab = p_compose(a, b)?;
    let ab_ai = p_compose(&ab, &a.inverse())?;
    p_compose(&ab_ai, &b.inverse())
}

/// Images of `α₁, β₁, …, α_g, β_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAssignment {
    genus: usize,
    images: Vec<Perm>,
}

impl GeneratorAssignment {
    pub fn new(genus: usize, images: Vec<Perm>) -> Result<Self> {
        if genus == 0 || images.len() != 2 * genus {
            return Err(Error::InvalidArgument(format!(
                "genus {genus} needs {} generator images, got {}",
                2 * genus,
                images.len()
            )));
        }
        let n = images[0].degree();
        if let Some(p) = images.iter().find(|p| p.degree() != n) {
            return Err(Error::SizeMismatch(n, p.degree()));
        }
        Ok(GeneratorAssignment { genus, images })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn alpha(&self, i: usize) -> &Perm {
        &self.images[2 * (i - 1)]
    }

    pub fn beta(&self, i: usize) -> &Perm {
        &self.images[2 * (i - 1) + 1]
    }
}

impl fmt::Display for GeneratorAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.genus {
            if i > 1 {
                f.write_str(" ")?;
            }
            write!(f, "a{i}={} b{i}={}", self.alpha(i), self.beta(i))?;
        }
        Ok(())
    }
}

/// `∏ᵢ [αᵢ, βᵢ]`, in index order.
pub fn surface_relation(assign: &GeneratorAssignment) -> Perm {
    let n = assign.images[0].degree();
    (1..=assign.genus).fold(Perm::identity(n), |acc, i| {
        let c = commutator(assign.alpha(i), assign.beta(i)).expect("uniform degree");
        p_compose(&acc, &c).expect("uniform degree")
    })
}

/// All of `S_n` in lexicographic order of image vectors.
pub fn symmetric_group(n: usize) -> Vec<Perm> {
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Perm {
        images: current.clone(),
    }];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Perm {
            images: current.clone(),
        });
    }
}

/// Number of conjugacy classes of `S_n`, by computing conjugation orbits.
pub fn conjugacy_class_count(n: usize) -> usize {
    let group = symmetric_group(n);
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for g in &group {
        if seen.contains(g) {
            continue;
        }
        classes += 1;
        for h in &group {
            let conj = p_compose(&p_compose(h, g).expect("same n"), &h.inverse()).expect("same n");
            seen.insert(conj);
        }
    }
    classes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomCount {
    /// Assignments satisfying the surface relation.
    pub surface: u128,
    /// All assignments: homomorphisms from the free group.
    pub free: u128,
}

impl HomCount {
    /// Some free-group homomorphism does not factor through the surface group.
    pub fn witnesses_nonsurjectivity(&self) -> bool {
        self.surface < self.free
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Counts homomorphisms from the genus-`g` surface group and from the free
/// group on `2g` generators into `S_n`, by enumerating all assignments.
pub fn count_homs(g: usize, n: usize) -> Result<HomCount> {
    count_homs_with(Strategy::default(), g, n)
}

pub fn count_homs_with(strategy: Strategy, g: usize, n: usize) -> Result<HomCount> {
    if g == 0 || n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("need g ≥ 1 and 1 ≤ n ≤ {MAX_DEGREE}")));
    }
    let order = factorial(n);
    let free = (0..2 * g).try_fold(1u128, |acc, _| acc.checked_mul(order));
    let free = match free {
        Some(f) if f <= ENUMERATION_LIMIT => f,
        Some(f) => return Err(Error::TooLarge(f)),
        None => return Err(Error::TooLarge(u128::MAX)),
    };
    let group = symmetric_group(n);
    let size = group.len();
    let index = |p: &Perm| group.binary_search(p).expect("element of S_n");
    // commutator of each pair (αᵢ, βᵢ) and the multiplication table, as indices
    let comm: Vec<usize> = (0..size * size)
        .map(|k| index(&commutator(&group[k / size], &group[k % size]).expect("same n")))
        .collect();
    let mult: Vec<usize> = (0..size * size)
        .map(|k| index(&p_compose(&group[k / size], &group[k % size]).expect("same n")))
        .collect();
    let identity = index(&Perm::identity(n));
    let pairs = (size * size) as u64;
    // parallel over the pair (α₁, β₁); the remaining pairs are enumerated inside
    let inner = pairs.pow(g as u32 - 1);
    let surface = par::sum_range(strategy, pairs, |first| {
        let head = comm[first as usize];
        let mut count = 0u64;
        for rest in 0..inner {
            let mut acc = head;
            let mut r = rest;
            for _ in 1..g {
                acc = mult[acc * size + comm[(r % pairs) as usize]];
                r /= pairs;
            }
            if acc == identity {
                count += 1;
            }
        }
        count
    });
    Ok(HomCount {
        surface: surface as u128,
        free,
    })
}

/// The assignment `α₁ ↦ (12)`, `β₁ ↦ (123)`, every other generator to the
/// identity of `S₃`. Its relation value is a 3-cycle for every `g`.
pub fn witness_nonextendable(g: usize) -> Result<GeneratorAssignment> {
    let mut images = vec![Perm::identity(3); 2 * g.max(1)];
    images[0] = Perm::from_cycles(3, &[&[1, 2]])?;
    images[1] = Perm::from_cycles(3, &[&[1, 2, 3]])?;
    let assign = GeneratorAssignment::new(g, images)?;
    let rel = surface_relation(&assign);
    if rel.cycle_type() != [3] {
        return Err(Error::VerificationFailed(format!("relation value {rel} is not a 3-cycle")));
    }
    Ok(assign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Perm {
        Perm::parse(text, 3).unwrap()
    }

    #[test]
    fn composition_convention() {
        assert!(p_compose(&p("(12)"), &p("(12)")).unwrap().is_identity());
        // (12)∘(123): 1 → 2 → 1, 2 → 3 → 3, 3 → 1 → 2
        assert_eq!(p_compose(&p("(12)"), &p("(123)")).unwrap(), p("(23)"));
        assert_eq!(p_compose(&p("id"), &p("(132)")).unwrap(), p("(132)"));
        assert_eq!(p_compose(&p("id"), &Perm::identity(4)), Err(Error::SizeMismatch(3, 4)));
    }

    #[test]
    fn commutators() {
        assert!(commutator(&p("(12)"), &p("(12)")).unwrap().is_identity());
        assert_eq!(commutator(&p("(12)"), &p("(123)")).unwrap(), p("(123)"));
        assert!(commutator(&p("id"), &p("(13)")).unwrap().is_identity());
        for a in symmetric_group(3) {
            for b in symmetric_group(3) {
                assert_eq!(commutator(&a, &b).unwrap(), commutator(&b, &a).unwrap().inverse());
            }
        }
    }

    #[test]
    fn surface_relations() {
        let g1 = GeneratorAssignment::new(1, vec![p("(12)"), p("(123)")]).unwrap();
        assert!(!surface_relation(&g1).is_identity());
        let g2 = GeneratorAssignment::new(2, vec![p("id"); 4]).unwrap();
        assert!(surface_relation(&g2).is_identity());
        let padded = GeneratorAssignment::new(2, vec![p("(12)"), p("(123)"), p("id"), p("id")]).unwrap();
        assert_eq!(surface_relation(&padded), surface_relation(&g1));
    }

    #[test]
    fn hom_counts() {
        let c = count_homs(1, 3).unwrap();
        assert_eq!((c.free, c.surface), (36, 18));
        assert_eq!(c.surface, 6 * conjugacy_class_count(3) as u128);
        let c = count_homs(1, 2).unwrap();
        assert_eq!((c.free, c.surface), (4, 4));
        assert!(!c.witnesses_nonsurjectivity());
        assert!(count_homs(2, 3).unwrap().witnesses_nonsurjectivity());
        assert!(matches!(count_homs(3, 4), Err(Error::TooLarge(_))));
        for strategy in [Strategy::Sequential, Strategy::Parallel] {
            assert_eq!(count_homs_with(strategy, 2, 3).unwrap(), count_homs(2, 3).unwrap());
        }
    }

    #[test]
    fn witnesses() {
        for g in 1..=3 {
            let w = witness_nonextendable(g).unwrap();
            assert_eq!(w.images().len(), 2 * g);
            assert_eq!(surface_relation(&w).cycle_type(), vec![3]);
        }
        assert_eq!(witness_nonextendable(1).unwrap().to_string(), "a1=(12) b1=(123)");
    }

    #[test]
    fn group_sizes_and_text() {
        assert_eq!(symmetric_group(4).len(), 24);
        assert_eq!(conjugacy_class_count(4), 5);
        for g in symmetric_group(4) {
            assert_eq!(Perm::parse(&g.to_string(), 4).unwrap(), g);
        }
        assert!(Perm::parse("(12", 3).is_err());
        assert!(Perm::parse("(14)", 3).is_err());
    }
}
