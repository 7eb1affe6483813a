use std::fmt;

/// Which spacetime an object lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Minkowski objects: `η`, `∇^(η)` and unbarred fields.
    Flat,
    /// Objects on `(M, g)`: `g`, `∇^(g)`, curvature and barred images.
    Curved,
    /// The Kronecker delta lives on both.
    Neutral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Generic,
    Metric,
    Kronecker,
    /// `R^c_{abd}`, with `[∇_a, ∇_b] T^c = −R^c_{abd} T^d`.
    Riemann,
    /// `R_{ac} = R^b_{abc}`.
    Ricci,
    RicciScalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryKind {
    Symmetric,
    Antisymmetric,
}

/// Declared (anti)symmetry over a set of 0-based slot positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotSymmetry {
    pub kind: SymmetryKind,
    pub slots: Vec<usize>,
}

impl SlotSymmetry {
    pub fn antisymmetric(slots: Vec<usize>) -> Self {
        Self { kind: SymmetryKind::Antisymmetric, slots }
    }

    pub fn symmetric(slots: Vec<usize>) -> Self {
        Self { kind: SymmetryKind::Symmetric, slots }
    }
}

impl fmt::Display for SlotSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            SymmetryKind::Symmetric => "sym",
            SymmetryKind::Antisymmetric => "antisym",
        };
        let slots: Vec<String> = self.slots.iter().map(|s| (s + 1).to_string()).collect();
        write!(f, "{} {{{}}}", kw, slots.join(" "))
    }
}

/// A slot permutation with sign: `new[i] = old[perm[i]]`.
pub type GroupElement = (Vec<usize>, i8);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorSymbol {
    pub kind: SymbolKind,
    pub name: String,
    pub side: Side,
    pub symmetries: Vec<SlotSymmetry>,
}

impl TensorSymbol {
    pub fn generic(name: impl Into<String>, side: Side) -> Self {
        Self { kind: SymbolKind::Generic, name: name.into(), side, symmetries: Vec::new() }
    }

    pub fn with_symmetry(mut self, s: SlotSymmetry) -> Self {
        self.symmetries.push(s);
        self
    }

    pub fn metric(side: Side) -> Self {
        let name = if side == Side::Flat { "eta" } else { "g" };
        Self { kind: SymbolKind::Metric, name: name.into(), side, symmetries: Vec::new() }
    }

    pub fn kronecker() -> Self {
        Self { kind: SymbolKind::Kronecker, name: "delta".into(), side: Side::Neutral, symmetries: Vec::new() }
    }

    pub fn riemann() -> Self {
        Self { kind: SymbolKind::Riemann, name: "R".into(), side: Side::Curved, symmetries: Vec::new() }
    }

    pub fn ricci() -> Self {
        Self { kind: SymbolKind::Ricci, name: "Ric".into(), side: Side::Curved, symmetries: Vec::new() }
    }

    pub fn ricci_scalar() -> Self {
        Self { kind: SymbolKind::RicciScalar, name: "Rs".into(), side: Side::Curved, symmetries: Vec::new() }
    }

    pub fn is_generic(&self) -> bool {
        self.kind == SymbolKind::Generic
    }

    /// Name used for oracle bindings and diagnostics, e.g. `bar[T]`.
    pub fn display_name(&self) -> String {
        match (self.kind, self.side) {
            (SymbolKind::Generic, Side::Curved) => format!("bar[{}]", self.name),
            (SymbolKind::Riemann | SymbolKind::Ricci | SymbolKind::RicciScalar, _) => format!("{}[g]", self.name),
            _ => self.name.clone(),
        }
    }

    /// Same symbol on the curved side (the image under generalization).
    pub fn barred(&self) -> Self {
        let mut s = self.clone();
        if s.kind == SymbolKind::Metric {
            s.name = "g".into();
        }
        if s.side == Side::Flat {
            s.side = Side::Curved;
        }
        s
    }

    /// Monoterm symmetry group acting on `rank` slots.
    pub fn slot_group(&self, rank: usize) -> Vec<GroupElement> {
        let generators: Vec<GroupElement> = match self.kind {
            SymbolKind::Metric | SymbolKind::Kronecker | SymbolKind::Ricci if rank == 2 => {
                vec![(vec![1, 0], 1)]
            }
            SymbolKind::Riemann if rank == 4 => vec![
                (vec![0, 2, 1, 3], -1),
                (vec![3, 1, 2, 0], -1),
                (vec![2, 3, 0, 1], 1),
            ],
            SymbolKind::Generic => self
                .symmetries
                .iter()
                .filter(|s| s.slots.len() >= 2 && s.slots.iter().all(|&k| k < rank))
                .flat_map(|s| {
                    let sign = if s.kind == SymmetryKind::Antisymmetric { -1 } else { 1 };
                    s.slots.windows(2).map(move |w| {
                        let mut p: Vec<usize> = (0..rank).collect();
                        p.swap(w[0], w[1]);
                        (p, sign)
                    })
                })
                .collect(),
            _ => Vec::new(),
        };
        close_group(rank, &generators)
    }
}

fn compose(a: &GroupElement, b: &GroupElement) -> GroupElement {
    // apply b then a: new[i] = mid[a[i]] = old[b[a[i]]]
    (a.0.iter().map(|&i| b.0[i]).collect(), a.1 * b.1)
}

/// Closure of the generators. If a permutation is reached with both signs
/// the group contains `−1`; callers then see every element twice with
/// opposite signs, which is exactly how forced zeros are detected.
fn close_group(rank: usize, generators: &[GroupElement]) -> Vec<GroupElement> {
    let id: GroupElement = ((0..rank).collect(), 1);
    let mut out = vec![id];
    let mut frontier = 0;
    while frontier < out.len() {
        let cur = out[frontier].clone();
        frontier += 1;
        for g in generators {
            let next = compose(g, &cur);
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_group_has_eight_elements() {
        let g = TensorSymbol::riemann().slot_group(4);
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn antisymmetric_pair() {
        let f = TensorSymbol::generic("F", Side::Flat).with_symmetry(SlotSymmetry::antisymmetric(vec![0, 1]));
        let g = f.slot_group(2);
        assert_eq!(g, vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
    }

    #[test]
    fn totally_antisymmetric_three_slots() {
        let f = TensorSymbol::generic("W", Side::Flat).with_symmetry(SlotSymmetry::antisymmetric(vec![0, 1, 2]));
        let g = f.slot_group(3);
        assert_eq!(g.len(), 6);
        assert!(g.contains(&(vec![1, 2, 0], 1)));
        assert!(g.contains(&(vec![2, 1, 0], -1)));
    }
}
