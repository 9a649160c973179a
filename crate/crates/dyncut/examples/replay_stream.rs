//! Parses the bundled graph and stream files and replays them through the
//! command-line driver, printing the query lines of the report.

use std::path::PathBuf;

use clap::Parser;
use dyncut::cli::{run, Cli};
use dyncut::io::{read_graph, read_stream, StreamItem};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let (graph, stream) = (dir.join("demo.graph"), dir.join("demo.upd"));
    let g = read_graph(&graph).unwrap();
    let items = read_stream(&stream).unwrap();
    let queries = items.iter().filter(|l| matches!(l.item, StreamItem::Query(_))).count();
    println!("{} vertices, {} edges, {} stream lines ({queries} queries)", g.vertex_count(), g.edge_count(), items.len());

    let args = ["dyncut", "hierarchy", "--levels", "2", "--j", "3", "--strict", "--graph", graph.to_str().unwrap(), "--stream", stream.to_str().unwrap()];
    let out = run(&Cli::parse_from(args).command).unwrap();
    for q in &out.report.queries {
        println!("line {:>2} {:<16} value {:>5} witness {:>5} optimum {:>5}", q.line, q.query, q.value.exact, q.witness_value.exact, q.oracle.as_ref().map_or("-".into(), |o| o.exact.clone()));
    }
    println!("exit code {}", out.code);
}
