use horokit::point::Point;
fn main() {
    let d = horokit::domain::SlitDomain::comb_default(Some(2));
    let map = horokit::conformal::ConformalMap::fit(&d, 256, Point::new(0.5, 0.0)).unwrap();
    println!("accuracy {:.3e}", map.accuracy());
    horokit::conformal::debug_worst_probes(&map, 256, 12);
}
