use super::Restriction;
use crate::game::ParityGame;
use crate::Vertex;

/// A strongly connected component. `cyclic` holds when it contains a cycle:
/// more than one vertex, or a single vertex with a self-loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<Vertex>,
    pub cyclic: bool,
}

/// SCCs of the subgame `within`, in reverse topological order (components
/// without edges to other components come first).
pub fn sccs(game: &ParityGame, within: &Restriction) -> Vec<Component> {
    strongly_connected(within.mask(), |v| game.successors(v))
}

/// Iterative Tarjan over the vertices in `alive`, following `successors`
/// and ignoring edges to dead vertices.
pub fn strongly_connected<'a, F>(alive: &[bool], successors: F) -> Vec<Component>
where
    F: Fn(Vertex) -> &'a [Vertex],
{
    SccFinder::new(alive.len()).run(0..alive.len(), alive, successors)
}

/// Tarjan's algorithm with scratch space reused across calls, so repeated
/// searches over small parts of a large graph cost only the part's size.
#[derive(Debug, Clone)]
pub struct SccFinder {
    index: Vec<u32>,
    low: Vec<u32>,
    on_stack: Vec<bool>,
    touched: Vec<Vertex>,
}

const UNSEEN: u32 = u32::MAX;

impl SccFinder {
    pub fn new(n: usize) -> SccFinder {
        SccFinder {
            index: vec![UNSEEN; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            touched: Vec::new(),
        }
    }

    /// Components reachable from `roots` within `alive`, in reverse
    /// topological order.
    pub fn run<'a, F>(
        &mut self,
        roots: impl IntoIterator<Item = Vertex>,
        alive: &[bool],
        successors: F,
    ) -> Vec<Component>
    where
        F: Fn(Vertex) -> &'a [Vertex],
    {
        let mut stack: Vec<Vertex> = Vec::new();
        // (vertex, position in its successor list)
        let mut calls: Vec<(Vertex, usize)> = Vec::new();
        let mut next = 0u32;
        let mut out = Vec::new();

        for root in roots {
            if !alive[root] || self.index[root] != UNSEEN {
                continue;
            }
            self.visit(root, &mut next, &mut stack);
            calls.push((root, 0));

            while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
                let succ = successors(v);
                if let Some(&u) = succ.get(*pos) {
                    *pos += 1;
                    if !alive[u] {
                        continue;
                    }
                    if self.index[u] == UNSEEN {
                        self.visit(u, &mut next, &mut stack);
                        calls.push((u, 0));
                    } else if self.on_stack[u] {
                        self.low[v] = self.low[v].min(self.index[u]);
                    }
                    continue;
                }
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    self.low[parent] = self.low[parent].min(self.low[v]);
                }
                if self.low[v] == self.index[v] {
                    let mut vertices = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        self.on_stack[w] = false;
                        vertices.push(w);
                        if w == v {
                            break;
                        }
                    }
                    vertices.reverse();
                    let cyclic = vertices.len() > 1 || successors(v).contains(&v);
                    out.push(Component { vertices, cyclic });
                }
            }
        }
        for v in self.touched.drain(..) {
            self.index[v] = UNSEEN;
        }
        out
    }

    fn visit(&mut self, v: Vertex, next: &mut u32, stack: &mut Vec<Vertex>) {
        self.index[v] = *next;
        self.low[v] = *next;
        *next += 1;
        stack.push(v);
        self.on_stack[v] = true;
        self.touched.push(v);
    }
}
