//! Prints a curve file with its `points` section replaced by every affine
//! solution of the Gröbner basis, in lexicographic order.
//!
//!     cargo run --example enumerate_points -- curves/klein.curve

use agcode::curve::CurveData;

fn main() {
    let path = std::env::args().nth(1).expect("usage: enumerate_points FILE");
    let text = std::fs::read_to_string(&path).expect("readable curve file");
    let curve = CurveData::parse_without_points(&text).expect("valid curve header");
    let points = curve.enumerate_affine_points();
    let head = text.split("\npoints").next().unwrap();
    println!("{head}");
    println!("# {} points", points.len());
    println!("points");
    for p in points {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        println!("{}", row.join(" "));
    }
    println!("end");
}
