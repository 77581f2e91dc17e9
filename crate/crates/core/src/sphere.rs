//! Unit-sphere geometry: small vector helpers and geodesic icospheres.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// `a / |a|`; the zero vector is returned unchanged.
pub fn normalize(a: Vec3) -> Vec3 {
    let n = norm(a);
    if n == 0.0 {
        a
    } else {
        scale(1.0 / n, a)
    }
}

/// Angle between two nonzero vectors, accurate for nearly parallel inputs.
pub fn angle(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Rotation of `v` about the unit `axis` by `theta` (right-hand rule).
pub fn rotate(axis: Vec3, v: Vec3, theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    let k_cross_v = cross(axis, v);
    let k_dot_v = dot(axis, v);
    add(
        add(scale(c, v), scale(s, k_cross_v)),
        scale(k_dot_v * (1.0 - c), axis),
    )
}

/// Point at angular distance `s` from the unit vector `q`, on the great
/// circle from `q` through `x`. If `x` is (anti)parallel to `q` the result is `q`.
pub fn along_geodesic(q: Vec3, x: Vec3, s: f64) -> Vec3 {
    let t = sub(x, scale(dot(q, x), q));
    let tn = norm(t);
    if tn < 1e-300 {
        return q;
    }
    add(scale(s.cos(), q), scale(s.sin() / tn, t))
}

/// A unit vector orthogonal to the unit vector `c`.
pub fn orthogonal(c: Vec3) -> Vec3 {
    let helper = if c[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    normalize(sub(helper, scale(dot(helper, c), c)))
}

/// `count` nearly uniform points on the unit sphere (Fibonacci lattice).
pub fn fibonacci_points(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// Geodesic icosphere: the icosahedron with each face split `4^level` times
/// and all vertices pushed to the unit sphere. Faces are oriented so that
/// `(b - a) x (c - a)` points outward.
#[derive(Debug, Clone)]
pub struct Icosphere {
    level: u32,
    vertices: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
}

impl Icosphere {
    pub fn new(level: u32) -> Self {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut vertices: Vec<Vec3> = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ]
        .into_iter()
        .map(normalize)
        .collect();
        let mut faces: Vec<[u32; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for f in &mut faces {
            let [a, b, c] = f.map(|i| vertices[i as usize]);
            if dot(cross(sub(b, a), sub(c, a)), a) < 0.0 {
                f.swap(1, 2);
            }
        }
        for _ in 0..level {
            let mut midpoint: HashMap<(u32, u32), u32> = HashMap::new();
            let mut next = Vec::with_capacity(faces.len() * 4);
            let mut mid = |a: u32, b: u32, vertices: &mut Vec<Vec3>| -> u32 {
                let key = (a.min(b), a.max(b));
                *midpoint.entry(key).or_insert_with(|| {
                    let m = normalize(add(vertices[a as usize], vertices[b as usize]));
                    vertices.push(m);
                    (vertices.len() - 1) as u32
                })
            };
            for &[a, b, c] in &faces {
                let ab = mid(a, b, &mut vertices);
                let bc = mid(b, c, &mut vertices);
                let ca = mid(c, a, &mut vertices);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        Self {
            level,
            vertices,
            faces,
        }
    }

    /// Shared, lazily built mesh for a level.
    pub fn cached(level: u32) -> Arc<Icosphere> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Icosphere>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(m) = cache.lock().unwrap().get(&level) {
            return m.clone();
        }
        let mesh = Arc::new(Icosphere::new(level));
        cache.lock().unwrap().entry(level).or_insert(mesh).clone()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn edge_count(&self) -> usize {
        self.faces.len() * 3 / 2
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Longest edge, as an angle.
    pub fn max_edge_angle(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(i, j)| angle(self.vertices[i as usize], self.vertices[j as usize]))
            .fold(0.0, f64::max)
    }
}

/// Upper bound for the longest edge at a level, without building the mesh.
pub fn edge_bound(level: u32) -> f64 {
    // icosahedron edge is 1.1071 rad; subdivision distorts edges by < 20%
    1.1071487177940904 * 1.2 / f64::powi(2.0, level as i32)
}
