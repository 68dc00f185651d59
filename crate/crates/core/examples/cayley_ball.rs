//! Exact word lengths by breadth-first search, checked against the block
//! count, depth and normal-form bounds.

use nv_thompson::metrics::{check_bounds, standard_ball};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radius = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let ball = standard_ball(radius, 2)?;
    println!("sphere sizes: {:?}", ball.sphere_sizes());
    print!("{}", check_bounds(&ball)?);

    let widest = ball.records.iter().max_by_key(|r| (r.blocks, std::cmp::Reverse(r.length))).expect("nonempty");
    println!(
        "most blocks: {} at length {} (upper bound {})",
        widest.blocks, widest.length, widest.upper_bound
    );
    Ok(())
}
