//! Convex hull of integer points in ℤ³ (quickhull with exact predicates).
//!
//! Points on a facet plane are never "outside", so coplanar lattice points are
//! absorbed. Output is a triangulation; callers merge coplanar triangles.

type P3 = [i64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: P3, b: P3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[derive(Clone)]
struct Face {
    v: [usize; 3],
    normal: P3,
    offset: i64,
    /// neighbour across edge (v[k], v[(k+1)%3])
    adj: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
}

/// Returns triangles `(a,b,c)` oriented counter-clockwise seen from outside.
pub fn convex_hull(pts: &[P3]) -> Vec<[usize; 3]> {
    let n = pts.len();
    assert!(n >= 4, "hull needs at least 4 points");
    // initial simplex
    let i0 = 0;
    let i1 = (0..n).max_by_key(|&i| {
        let d = sub(pts[i], pts[i0]);
        dot(d, d)
    })
    .unwrap();
    let i2 = (0..n)
        .max_by_key(|&i| {
            let c = cross(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0]));
            dot(c, c)
        })
        .unwrap();
    let base = cross(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
    let i3 = (0..n)
        .max_by_key(|&i| dot(base, sub(pts[i], pts[i0])).abs())
        .unwrap();
    assert!(dot(base, sub(pts[i3], pts[i0])) != 0, "points are coplanar");

    let mut faces: Vec<Face> = Vec::new();
    let make = |a: usize, b: usize, c: usize| -> Face {
        let normal = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
        Face {
            v: [a, b, c],
            normal,
            offset: dot(normal, pts[a]),
            adj: [usize::MAX; 3],
            outside: Vec::new(),
            alive: true,
        }
    };
    let above = |f: &Face, p: usize| dot(f.normal, pts[p]) > f.offset;

    let tet = if dot(base, sub(pts[i3], pts[i0])) > 0 {
        // i3 above (i0,i1,i2): flip base
        [[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    } else {
        [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    };
    for t in tet {
        faces.push(make(t[0], t[1], t[2]));
    }
    link_all(&mut faces);
    for p in 0..n {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        if let Some(f) = (0..4).find(|&f| above(&faces[f], p)) {
            faces[f].outside.push(p);
        }
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let f = &faces[fi];
        let nn = f.normal.map(|c| c as f64);
        let len = (nn[0] * nn[0] + nn[1] * nn[1] + nn[2] * nn[2]).sqrt();
        let eye = *f
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let da = (dot(f.normal, pts[a]) - f.offset) as f64 / len;
                let db = (dot(f.normal, pts[b]) - f.offset) as f64 / len;
                da.total_cmp(&db)
            })
            .unwrap();
        // visible region by flood fill
        let mut visible = vec![fi];
        let mut seen = std::collections::HashSet::from([fi]);
        let mut k = 0;
        while k < visible.len() {
            let cur = visible[k];
            k += 1;
            for &nb in &faces[cur].adj {
                if seen.insert(nb) && above(&faces[nb], eye) {
                    visible.push(nb);
                }
            }
        }
        let vis: std::collections::HashSet<usize> = visible.iter().copied().collect();
        // horizon edges (a,b) oriented as in the visible face, with the hidden neighbour
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
        for &vf in &visible {
            for e in 0..3 {
                let nb = faces[vf].adj[e];
                if !vis.contains(&nb) {
                    horizon.push((faces[vf].v[e], faces[vf].v[(e + 1) % 3], nb));
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &vf in &visible {
            faces[vf].alive = false;
            orphans.append(&mut faces[vf].outside);
        }
        let mut created = Vec::with_capacity(horizon.len());
        for &(a, b, nb) in &horizon {
            let id = faces.len();
            let mut nf = make(a, b, eye);
            nf.adj[0] = nb;
            // point the hidden neighbour back at the new face
            let slot = (0..3)
                .find(|&e| faces[nb].v[e] == b && faces[nb].v[(e + 1) % 3] == a)
                .expect("horizon edge must be shared");
            faces[nb].adj[slot] = id;
            faces.push(nf);
            created.push(id);
        }
        // stitch the fan: edge (b, eye) of one face meets (eye, b) of the next
        for &id in &created {
            let b = faces[id].v[1];
            let a = faces[id].v[0];
            let next = *created.iter().find(|&&o| faces[o].v[0] == b).unwrap();
            let prev = *created.iter().find(|&&o| faces[o].v[1] == a).unwrap();
            faces[id].adj[1] = next;
            faces[id].adj[2] = prev;
        }
        for p in orphans {
            if p == eye {
                continue;
            }
            if let Some(&f) = created.iter().find(|&&f| above(&faces[f], p)) {
                faces[f].outside.push(p);
            }
        }
        stack.extend(created);
    }
    faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect()
}

fn link_all(faces: &mut [Face]) {
    for i in 0..faces.len() {
        for e in 0..3 {
            let (a, b) = (faces[i].v[e], faces[i].v[(e + 1) % 3]);
            for j in 0..faces.len() {
                if j == i {
                    continue;
                }
                for g in 0..3 {
                    if faces[j].v[g] == b && faces[j].v[(g + 1) % 3] == a {
                        faces[i].adj[e] = j;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut pts = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    pts.push([x, y, z]);
                }
            }
        }
        let tris = convex_hull(&pts);
        // every point is on or below every hull plane
        for t in &tris {
            let n = cross(sub(pts[t[1]], pts[t[0]]), sub(pts[t[2]], pts[t[0]]));
            let off = dot(n, pts[t[0]]);
            assert!(pts.iter().all(|&p| dot(n, p) <= off));
        }
        // hull vertices are the 8 corners
        let mut vs: Vec<usize> = tris.iter().flatten().copied().collect();
        vs.sort();
        vs.dedup();
        assert_eq!(vs.len(), 8);
        assert_eq!(tris.len(), 12);
    }
}
