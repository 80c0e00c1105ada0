use std::fmt::Write;

use super::{CongruenceScheme, FiniteSpace};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render(space: &FiniteSpace, label: impl Fn(usize) -> Option<String>) -> String {
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by(|&x, &y| space.name(x).cmp(space.name(y)));
    let mut out = String::from("digraph spec {\n");
    for &x in &order {
        match label(x) {
            Some(l) => writeln!(out, "  {} [label={}];", quote(space.name(x)), quote(&l)).unwrap(),
            None => writeln!(out, "  {};", quote(space.name(x))).unwrap(),
        }
    }
    let mut edges: Vec<(&str, &str)> = space
        .covers()
        .into_iter()
        .map(|(x, y)| (space.name(x), space.name(y)))
        .collect();
    edges.sort();
    for (x, y) in edges {
        writeln!(out, "  {} -> {};", quote(x), quote(y)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram, edges pointing from smaller to larger points.
pub fn poset_dot(space: &FiniteSpace) -> String {
    render(space, |_| None)
}

/// Hasse diagram with the stalk size at every point.
pub fn scheme_dot(x: &CongruenceScheme) -> String {
    render(x.space(), |p| {
        Some(format!("{} |O|={}", x.space().name(p), x.stalk(p).len()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(poset_dot(&FiniteSpace::empty()), "digraph spec {\n}\n");
        assert_eq!(
            poset_dot(&FiniteSpace::point()),
            "digraph spec {\n  \"p\";\n}\n"
        );
        let s = poset_dot(&FiniteSpace::sierpinski());
        assert!(s.contains("\"o\" -> \"c\";"));
        assert!(s.find("\"c\";").unwrap() < s.find("\"o\";").unwrap());
    }
}
