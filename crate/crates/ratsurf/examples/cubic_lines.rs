//! The 27 lines on a cubic surface as exceptional classes of the 6-point
//! blowup, each traced back to some Eᵢ by Cremona moves.

use ratsurf::exceptional::{exceptional_classes, reduce_exceptional};

fn main() -> ratsurf::Result<()> {
    let lines = exceptional_classes(6);
    println!("{} exceptional classes", lines.len());
    for e in lines.iter() {
        let t = reduce_exceptional(e)?;
        let path: Vec<String> = t.classes().iter().map(|c| c.to_string()).collect();
        println!("{:>22}  degree {}  {}", e.to_string(), e.degree(), path.join(" -> "));
    }
    Ok(())
}
