use wdrd_core::{cayley_cyclic, complete, dgf, folded_johnson, johnson, CayleySpec, Digraph, LabeledGraph};

fn generated() -> Vec<Digraph> {
    let labeled: Vec<LabeledGraph> =
        vec![johnson(4, 2).unwrap(), johnson(7, 3).unwrap(), johnson(5, 1).unwrap(), folded_johnson(5).unwrap()];
    let mut out: Vec<Digraph> = labeled.iter().map(|g| g.graph().clone()).collect();
    out.push(cayley_cyclic(&CayleySpec::new(6, vec![1, 4]).unwrap()));
    out.push(cayley_cyclic(&CayleySpec::new(12, vec![1, 5, 7]).unwrap()));
    out.push(complete(1));
    out.push(complete(9));
    out
}

#[test]
fn every_generator_round_trips_through_dgf() {
    for d in generated() {
        let text = dgf::write(&d);
        assert_eq!(dgf::parse(&text).unwrap(), d);
        assert_eq!(text.lines().count(), 1 + d.arc_count());
    }
}

#[test]
fn label_side_file_lists_every_vertex() {
    let g = johnson(4, 2).unwrap();
    let text = g.label_lines();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "0 {0,1}");
    assert_eq!(lines[5], "5 {2,3}");
    let f = folded_johnson(4).unwrap();
    assert!(f.label_lines().lines().all(|l| l.contains("{0,")));
}
