//! Labels of a star in a cube-free median graph.
//!
//! The center gets the empty set, the neighbor behind port `k` of the center
//! gets `{k}` and a cone root gets the union of its two square neighbors'
//! labels. Star distance is the size of the symmetric difference.

use std::fmt;

use crate::graph::PortId;

/// A set of at most two positive integers; 0 marks an absent slot.
/// Slots are kept sorted with absent slots last.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarLabel([u32; 2]);

impl StarLabel {
    pub const EMPTY: StarLabel = StarLabel([0, 0]);

    pub fn single(a: u32) -> Self {
        assert!(a > 0, "star label values are positive");
        StarLabel([a, 0])
    }

    pub fn pair(a: u32, b: u32) -> Self {
        assert!(a > 0 && b > 0 && a != b, "star label values are distinct and positive");
        StarLabel([a.min(b), a.max(b)])
    }

    /// Builds a label from raw slots as stored in serialized form.
    pub fn from_slots(slots: [u32; 2]) -> Option<Self> {
        match slots {
            [0, 0] => Some(Self::EMPTY),
            [a, 0] => Some(Self::single(a)),
            [a, b] if a != 0 && a < b => Some(Self::pair(a, b)),
            _ => None,
        }
    }

    pub fn slots(self) -> [u32; 2] {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    pub fn is_empty(self) -> bool {
        self.0[0] == 0
    }

    pub fn contains(self, x: u32) -> bool {
        x != 0 && self.0.contains(&x)
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.0.into_iter().filter(|&x| x != 0)
    }

    /// Union of two labels, if it still has at most two elements.
    pub fn union(self, other: StarLabel) -> Option<StarLabel> {
        let mut vals: Vec<u32> = self.iter().chain(other.iter()).collect();
        vals.sort_unstable();
        vals.dedup();
        match vals[..] {
            [] => Some(Self::EMPTY),
            [a] => Some(Self::single(a)),
            [a, b] => Some(Self::pair(a, b)),
            _ => None,
        }
    }

    /// The smallest element, used as the 1st panel of a cone.
    pub fn first(self) -> Option<u32> {
        self.iter().next()
    }
}

impl fmt::Display for StarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Distance between two star members given their labels.
pub fn star_dist(x: StarLabel, y: StarLabel) -> u32 {
    let only_x = x.iter().filter(|&a| !y.contains(a)).count();
    let only_y = y.iter().filter(|&a| !x.contains(a)).count();
    (only_x + only_y) as u32
}

/// The label of the next star member on a shortest path from `x` to `y`:
/// drop an element of `x \ y` if there is one, else add the smallest
/// element of `y \ x`. Returns `x` when `x == y`.
pub fn star_step(x: StarLabel, y: StarLabel) -> StarLabel {
    if let Some(a) = x.iter().find(|&a| !y.contains(a)) {
        let rest: Vec<u32> = x.iter().filter(|&b| b != a).collect();
        return match rest[..] {
            [] => StarLabel::EMPTY,
            [b] => StarLabel::single(b),
            _ => unreachable!("labels hold at most two elements"),
        };
    }
    match y.iter().find(|&a| !x.contains(a)) {
        Some(a) => x.union(StarLabel::single(a)).expect("y has at most two elements"),
        None => x,
    }
}

/// Port from `x` toward `y` inside the star. `port_of(from, to)` maps a
/// pair of adjacent member labels to the host port; at the center the port
/// equals the neighbor's label value.
pub fn star_rout(
    x: StarLabel,
    y: StarLabel,
    port_of: impl Fn(StarLabel, StarLabel) -> Option<PortId>,
) -> Option<PortId> {
    if x == y {
        return Some(0);
    }
    let next = star_step(x, y);
    if x.is_empty() {
        return next.first();
    }
    port_of(x, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn label(vals: &[u32]) -> StarLabel {
        match *vals {
            [] => StarLabel::EMPTY,
            [a] => StarLabel::single(a),
            [a, b] => StarLabel::pair(a, b),
            _ => panic!(),
        }
    }

    #[test]
    fn distances() {
        assert_eq!(star_dist(label(&[]), label(&[1])), 1);
        assert_eq!(star_dist(label(&[1, 2]), label(&[3, 4])), 4);
        assert_eq!(star_dist(label(&[1, 2]), label(&[2, 3])), 2);
        assert_eq!(star_dist(label(&[2, 1]), label(&[1, 2])), 0);
    }

    #[test]
    fn steps() {
        assert_eq!(star_step(label(&[]), label(&[1, 2])), label(&[1]));
        assert_eq!(star_step(label(&[1, 2]), label(&[1])), label(&[1]));
        assert_eq!(star_step(label(&[1, 2]), label(&[3, 4])), label(&[2]));
        assert_eq!(star_rout(label(&[]), label(&[3, 4]), |_, _| None), Some(3));
        assert_eq!(star_rout(label(&[5]), label(&[5]), |_, _| None), Some(0));
    }

    #[test]
    fn slots_round_trip() {
        for l in [label(&[]), label(&[4]), label(&[2, 7])] {
            assert_eq!(StarLabel::from_slots(l.slots()), Some(l));
        }
        assert_eq!(StarLabel::from_slots([0, 3]), None);
        assert_eq!(StarLabel::from_slots([3, 3]), None);
        assert_eq!(label(&[2, 7]).to_string(), "{2,7}");
    }

    fn arb_label() -> impl Strategy<Value = StarLabel> {
        prop_oneof![
            Just(StarLabel::EMPTY),
            (1u32..6).prop_map(StarLabel::single),
            (1u32..6, 1u32..6)
                .prop_filter("distinct", |(a, b)| a != b)
                .prop_map(|(a, b)| StarLabel::pair(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn star_dist_is_a_metric(x in arb_label(), y in arb_label(), z in arb_label()) {
            prop_assert_eq!(star_dist(x, y), star_dist(y, x));
            prop_assert_eq!(star_dist(x, y) == 0, x == y);
            prop_assert!(star_dist(x, z) <= star_dist(x, y) + star_dist(y, z));
        }

        #[test]
        fn steps_make_progress(x in arb_label(), y in arb_label()) {
            let mut at = x;
            let mut hops = 0;
            while at != y {
                let next = star_step(at, y);
                prop_assert_eq!(star_dist(next, y) + 1, star_dist(at, y));
                prop_assert_eq!(star_dist(at, next), 1);
                at = next;
                hops += 1;
            }
            prop_assert_eq!(hops, star_dist(x, y));
        }
    }
}
