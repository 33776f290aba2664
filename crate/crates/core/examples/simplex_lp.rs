//! Solve a small linear program with the in-repo revised simplex.

use pmflab::lp::{LinearProgram, RowKind, SimplexOptions};

fn main() {
    // maximize 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6,  x <= 3
    let mut lp = LinearProgram::new();
    let x = lp.add_var(3.0);
    let y = lp.add_var(2.0);
    lp.add_row(vec![(x, 1.0), (y, 1.0)], RowKind::Le, 4.0);
    lp.add_row(vec![(x, 1.0), (y, 3.0)], RowKind::Le, 6.0);
    lp.add_row(vec![(x, 1.0)], RowKind::Le, 3.0);
    let sol = lp.solve(&SimplexOptions::default());
    println!("status    {:?}", sol.status);
    println!("objective {}", sol.objective);
    println!("x = {}, y = {}", sol.x[x], sol.x[y]);
    println!("duals     {:?}", sol.duals);
    println!("pivots    {}", sol.iterations);
}
