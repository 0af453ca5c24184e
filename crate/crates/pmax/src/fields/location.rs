/// A named point in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub id: String,
    pub coords: (f64, f64),
}

impl Location {
    pub fn new(id: impl Into<String>, x1: f64, x2: f64) -> Self {
        Self {
            id: id.into(),
            coords: (x1, x2),
        }
    }

    /// Euclidean distance between two locations.
    pub fn distance(&self, other: &Location) -> f64 {
        let dx = self.coords.0 - other.coords.0;
        let dy = self.coords.1 - other.coords.1;
        (dx * dx + dy * dy).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_euclidean_and_zero_on_self() {
        let a = Location::new("a", 0.0, 0.0);
        let b = Location::new("b", 3.0, 4.0);
        assert_eq!(a.distance(&b), 5.0);
        assert_eq!(a.distance(&a), 0.0);
    }
}
