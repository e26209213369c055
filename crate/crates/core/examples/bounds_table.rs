//! Dimension bounds for totally skew disks and spheres.

use skewkit::bounds::{bounds_table, davis_sections, immersion_bound, write_csv, Target, PUBLISHED_TABLE};

fn main() -> skewkit::Result<()> {
    let derived = bounds_table(1..=17, Target::Disk, false)?;
    println!(" n  formulas  table  upper  exact");
    for (r, t) in derived.iter().zip(PUBLISHED_TABLE) {
        let exact = r.exact.map(|e| e.to_string()).unwrap_or_default();
        println!("{:>2}  {:>8}  {:>5}  {:>5}  {exact}", r.n, r.lower.value, t, r.upper.value);
    }
    println!("davis_sections(8, 6) = {}", davis_sections(8, 6)?);
    println!("immersion_bound(17) = {}", immersion_bound(17)?);

    println!("\nspheres, CSV:");
    write_csv(&bounds_table(1..=6, Target::Sphere, true)?, std::io::stdout().lock())?;
    Ok(())
}
