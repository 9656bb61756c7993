use earmatch::construct::double_star_tree;
use earmatch::graph::{BipGraph, Tree};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad tree description: {0}")]
    Tree(String),
}

fn field(words: &mut std::str::SplitWhitespace<'_>, line: usize, what: &str) -> Result<usize, FormatError> {
    let word = words
        .next()
        .ok_or_else(|| FormatError::Parse { line, msg: format!("missing {what}") })?;
    word.parse().map_err(|_| FormatError::Parse { line, msg: format!("bad {what} `{word}`") })
}

fn end_of_line(words: &mut std::str::SplitWhitespace<'_>, line: usize) -> Result<(), FormatError> {
    match words.next() {
        Some(extra) => {
            Err(FormatError::Parse { line, msg: format!("unexpected trailing `{extra}`") })
        }
        None => Ok(()),
    }
}

/// Reads the line-oriented graph format: a `bip <a> <b>` header, then one
/// `<a_index> <b_index>` line per edge. `#` starts a comment and blank
/// lines are skipped. Edge order and repeated edges are preserved.
pub fn parse_graph(text: &str) -> Result<BipGraph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        match header {
            None => {
                let keyword = words.next().unwrap_or("");
                if keyword != "bip" {
                    return Err(FormatError::Parse {
                        line,
                        msg: format!("expected `bip <a> <b>` header, found `{keyword}`"),
                    });
                }
                let a = field(&mut words, line, "first class size")?;
                let b = field(&mut words, line, "second class size")?;
                end_of_line(&mut words, line)?;
                header = Some((a, b));
            }
            Some((a, b)) => {
                let x = field(&mut words, line, "first endpoint")?;
                let y = field(&mut words, line, "second endpoint")?;
                end_of_line(&mut words, line)?;
                if x >= a {
                    return Err(FormatError::Parse {
                        line,
                        msg: format!("vertex a{x} is out of range for {a} first-class vertices"),
                    });
                }
                if y >= b {
                    return Err(FormatError::Parse {
                        line,
                        msg: format!("vertex b{y} is out of range for {b} second-class vertices"),
                    });
                }
                edges.push((x, y));
            }
        }
    }
    let (a, b) =
        header.ok_or(FormatError::Parse { line: 1, msg: "missing `bip` header".into() })?;
    Ok(BipGraph::build(a, b, edges).expect("endpoints checked per line"))
}

pub fn render_graph(g: &BipGraph) -> String {
    let mut out = format!("bip {} {}\n", g.a_count(), g.b_count());
    for &(x, y) in g.edges() {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}

/// DOT rendering with the degree structure made visible: the first class
/// draws as circles and the second as boxes, degree-two vertices are
/// filled green, and edges between two degree-two vertices are cyan.
pub fn dot_graph(g: &BipGraph) -> String {
    let mut deg_a = vec![0usize; g.a_count()];
    let mut deg_b = vec![0usize; g.b_count()];
    for &(x, y) in g.edges() {
        deg_a[x] += 1;
        deg_b[y] += 1;
    }
    let mut out = String::from("graph {\n");
    for (i, &d) in deg_a.iter().enumerate() {
        let fill = if d == 2 { ", style=filled, fillcolor=palegreen" } else { "" };
        out.push_str(&format!("  a{i} [shape=circle{fill}];\n"));
    }
    for (j, &d) in deg_b.iter().enumerate() {
        let fill = if d == 2 { ", style=filled, fillcolor=palegreen" } else { "" };
        out.push_str(&format!("  b{j} [shape=box{fill}];\n"));
    }
    for &(x, y) in g.edges() {
        let style =
            if deg_a[x] == 2 && deg_b[y] == 2 { " [color=cyan3, penwidth=2]" } else { "" };
        out.push_str(&format!("  a{x} -- b{y}{style};\n"));
    }
    out.push_str("}\n");
    out
}

/// Reads the structure back out of [`dot_graph`] output: node statements
/// size the two classes and `--` statements list the edges in order.
pub fn parse_dot(text: &str) -> Result<BipGraph, FormatError> {
    fn vertex(token: &str, line: usize) -> Result<(char, usize), FormatError> {
        let side = token.chars().next().unwrap_or(' ');
        let index: Result<usize, _> = token[1..].parse();
        match (side, index) {
            ('a' | 'b', Ok(i)) => Ok((side, i)),
            _ => Err(FormatError::Parse { line, msg: format!("bad vertex name `{token}`") }),
        }
    }
    let mut a_count = 0;
    let mut b_count = 0;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split("//").next().unwrap_or("").trim().trim_end_matches(';');
        if content.is_empty() || content.starts_with("graph") || content == "}" {
            continue;
        }
        let stmt = content.split('[').next().unwrap_or("").trim();
        let mut names = stmt.split("--").map(str::trim);
        let first = vertex(names.next().unwrap_or(""), line)?;
        match names.next() {
            None => match first {
                ('a', i) => a_count = a_count.max(i + 1),
                (_, j) => b_count = b_count.max(j + 1),
            },
            Some(second) => {
                let second = vertex(second, line)?;
                let (x, y) = match (first, second) {
                    (('a', x), ('b', y)) | (('b', y), ('a', x)) => (x, y),
                    _ => {
                        return Err(FormatError::Parse {
                            line,
                            msg: "edge must join the two classes".into(),
                        })
                    }
                };
                a_count = a_count.max(x + 1);
                b_count = b_count.max(y + 1);
                edges.push((x, y));
            }
        }
    }
    BipGraph::build(a_count, b_count, edges)
        .map_err(|e| FormatError::Parse { line: 1, msg: e.to_string() })
}

/// Small tree descriptions for the construction commands:
/// `star <r>` (a center with `r` leaves), `path <n>` (on `n` vertices),
/// `double <p> <q>` (two adjacent centers of degrees `p` and `q`), or
/// `edges <n> <u>-<v> ...` for an explicit edge list on vertices `0..n`.
pub fn parse_tree(desc: &str) -> Result<Tree, FormatError> {
    let bad = |msg: String| FormatError::Tree(msg);
    let mut words = desc.split_whitespace();
    let kind = words.next().ok_or_else(|| bad("empty description".into()))?;
    let mut num = |what: &str| -> Result<usize, FormatError> {
        let word = words.next().ok_or_else(|| bad(format!("missing {what}")))?;
        word.parse().map_err(|_| bad(format!("bad {what} `{word}`")))
    };
    let tree = match kind {
        "star" => {
            let r = num("leaf count")?;
            Tree::new(r + 1, (1..=r).map(|i| (0, i)))
        }
        "path" => {
            let n = num("vertex count")?;
            if n == 0 {
                return Err(bad("a path needs at least one vertex".into()));
            }
            Tree::new(n, (1..n).map(|i| (i - 1, i)))
        }
        "double" => {
            let p = num("first center degree")?;
            let q = num("second center degree")?;
            return double_star_tree(p, q).map_err(|e| bad(e.to_string()));
        }
        "edges" => {
            let n = num("vertex count")?;
            let mut edges = Vec::new();
            for word in words {
                let (u, v) = word
                    .split_once('-')
                    .ok_or_else(|| bad(format!("expected `<u>-<v>`, found `{word}`")))?;
                let u: usize = u.parse().map_err(|_| bad(format!("bad endpoint `{u}`")))?;
                let v: usize = v.parse().map_err(|_| bad(format!("bad endpoint `{v}`")))?;
                edges.push((u, v));
            }
            return Tree::new(n, edges).map_err(|e| bad(e.to_string()));
        }
        other => return Err(bad(format!("unknown kind `{other}`"))),
    };
    match tree {
        Ok(tree) => {
            if let Some(extra) = words.next() {
                return Err(bad(format!("unexpected trailing `{extra}`")));
            }
            Ok(tree)
        }
        Err(e) => Err(bad(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use earmatch::graph::{complete_bipartite, cycle4, theta_graph};

    fn same_labeled_graph(g: &BipGraph, h: &BipGraph) -> bool {
        let mut ge = g.edges().to_vec();
        let mut he = h.edges().to_vec();
        ge.sort_unstable();
        he.sort_unstable();
        g.a_count() == h.a_count() && g.b_count() == h.b_count() && ge == he
    }

    #[test]
    fn the_documented_examples_parse() {
        let square = parse_graph("bip 2 2\n0 0\n0 1\n1 0\n1 1\n").unwrap();
        assert!(same_labeled_graph(&square, &cycle4()));
        let claw = parse_graph("bip 1 3\n0 0\n0 1\n0 2\n").unwrap();
        assert!(same_labeled_graph(&claw, &complete_bipartite(1, 3)));
        match parse_graph("bip 2 2\n0 7\n") {
            Err(FormatError::Parse { line: 2, .. }) => {}
            other => panic!("expected a line 2 error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let g = parse_graph("# a square\n\nbip 2 2  # sides\n0 0\n0 1 # top\n1 0\n1 1\n").unwrap();
        assert!(same_labeled_graph(&g, &cycle4()));
    }

    #[test]
    fn rendering_round_trips_with_order_and_multiplicity() {
        let g = BipGraph::build(2, 3, [(1, 2), (0, 0), (1, 2), (0, 1)]).unwrap();
        let text = render_graph(&g);
        assert_eq!(text, "bip 2 3\n1 2\n0 0\n1 2\n0 1\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn missing_or_bad_headers_fail_with_a_line() {
        for (text, line) in [("", 1), ("graph 2 2\n", 1), ("bip 2\n", 1), ("# only\n\n", 1)] {
            match parse_graph(text) {
                Err(FormatError::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn dot_output_reimports_as_the_same_structure() {
        for g in [cycle4(), theta_graph(), complete_bipartite(3, 4)] {
            let dot = dot_graph(&g);
            assert_eq!(parse_dot(&dot).unwrap(), g);
        }
    }

    #[test]
    fn dot_styles_the_degree_two_structure() {
        let dot = dot_graph(&theta_graph());
        assert!(dot.contains("fillcolor=palegreen"));
        assert!(dot.contains("color=cyan3"));
        let plain = dot_graph(&complete_bipartite(3, 3));
        assert!(!plain.contains("palegreen"));
        assert!(!plain.contains("cyan3"));
    }

    #[test]
    fn tree_descriptions_build_the_expected_shapes() {
        let star = parse_tree("star 3").unwrap();
        assert_eq!((star.n(), star.leaves().len()), (4, 3));
        let path = parse_tree("path 5").unwrap();
        assert_eq!((path.n(), path.leaves().len()), (5, 2));
        let double = parse_tree("double 3 4").unwrap();
        assert_eq!((double.n(), double.leaves().len()), (7, 5));
        let listed = parse_tree("edges 5 0-1 1-2 1-3 3-4").unwrap();
        assert_eq!((listed.n(), listed.leaves().len()), (5, 3));
        for bad in ["", "star", "star x", "path 0", "ring 4", "edges 3 0-1", "star 3 9"] {
            assert!(parse_tree(bad).is_err(), "{bad:?}");
        }
    }
}
