fn main() {
    println!("diskgeo");
}
