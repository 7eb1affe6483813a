use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Up,
    Down,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }

    pub fn marker(self) -> char {
        match self {
            Variance::Up => '^',
            Variance::Down => '_',
        }
    }
}

/// An abstract index: a slot name plus its position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexLabel {
    pub name: String,
    pub variance: Variance,
}

impl IndexLabel {
    pub fn new(name: impl Into<String>, variance: Variance) -> Self {
        Self { name: name.into(), variance }
    }

    pub fn up(name: impl Into<String>) -> Self {
        Self::new(name, Variance::Up)
    }

    pub fn down(name: impl Into<String>) -> Self {
        Self::new(name, Variance::Down)
    }

    pub fn flipped(&self) -> Self {
        Self::new(self.name.clone(), self.variance.flip())
    }
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.variance.marker(), self.name)
    }
}

/// Valid index names are a letter followed by digits, so they can be
/// concatenated inside `{...}` groups without separators.
pub fn is_index_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_digit())
}

/// Index names in the order canonical dummies are drawn from.
pub fn dummy_name_pool() -> impl Iterator<Item = String> {
    let letters = "abcdefghijklmnopqrstuvwxyz";
    letters
        .chars()
        .map(|c| c.to_string())
        .chain((1..).flat_map(move |k| letters.chars().map(move |c| format!("{c}{k}"))))
}
