//! Density and scatter images of one orbit.

use std::path::Path;

use rnifs::render;
use rnifs::system::{generate_orbit, RnifsSystem, DEFAULT_X0};

fn main() -> rnifs::Result<()> {
    let sys = RnifsSystem::from_ids(&["f11", "f12"], &[0.5, 0.5])?;
    let cloud = generate_orbit(&sys, DEFAULT_X0, 200_000, 1_000, 5)?;
    let grid = render::density_grid(cloud.points(), 512, 512)?;
    render::write_density_image(&grid, Path::new("density.ppm"))?;
    let lit = render::write_scatter_image(cloud.points(), 800, 800, Path::new("scatter.ppm"))?;
    println!("densest cell {} points; {lit} lit scatter pixels", grid.max_count());
    Ok(())
}
