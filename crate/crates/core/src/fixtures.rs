//! Two small hand-made games with known solutions, used throughout the tests.
//!
//! In `g2` every vertex is identified by its priority.

use crate::game::{GameBuilder, ParityGame, Player};

/// Two Even vertices: `0` (priority 1) loops or moves to `1` (priority 2),
/// which moves back to `0`. Even wins both by always moving to `1`.
pub fn g1() -> ParityGame {
    let mut b = GameBuilder::new();
    b.add_vertex(0, 1, Player::Even, vec![0, 1], None).unwrap();
    b.add_vertex(1, 2, Player::Even, vec![0], None).unwrap();
    b.build().unwrap()
}

/// Eight vertices won entirely by Even, where the tempting move `2 -> 16`
/// is losing because every cycle through 16 is dragged through 17.
pub fn g2() -> ParityGame {
    use Player::{Even, Odd};
    let table: [(u64, Player, &[u64]); 8] = [
        (3, Even, &[3, 16]),
        (18, Even, &[3]),
        (1, Odd, &[18, 2]),
        (2, Even, &[1, 16]),
        (16, Even, &[5]),
        (5, Even, &[4]),
        (4, Even, &[5, 17]),
        (17, Even, &[2]),
    ];
    let mut b = GameBuilder::new();
    for (id, owner, succ) in table {
        b.add_vertex(id, id as u32, owner, succ.to_vec(), Some(id.to_string()))
            .unwrap();
    }
    b.build().unwrap()
}
