//! Hand-built contribution fixtures.

/// `(contributor, library, commits, pulls)`.
pub type ContributionRow = (String, String, u64, u64);

pub const LIBRARIES: usize = 15;

fn lib(i: usize) -> String {
    format!("lib{i:02}")
}

/// Fifteen libraries, each with three top specialists (total 350 each), one
/// of whom also contributes to a second library. A middle tier of 70
/// contributors (total 70 each) includes 14 bridges chaining `lib_i` to
/// `lib_{i+1}`; a long tail of 300 casual contributors add 1–2 each.
///
/// Head/tail breaks at the 0.4 limit puts the 45 specialists in bin 1, the
/// middle tier in bin 2 and the casuals in bin 3. The bin-1 projection has
/// 14 components; from bin 2 on it is connected.
pub fn specialists_and_bridges() -> Vec<ContributionRow> {
    let mut rows = Vec::new();
    for l in 0..LIBRARIES {
        for s in ["a", "b", "c"] {
            let who = format!("spec-{l:02}-{s}");
            if l == 0 && s == "a" {
                rows.push((who.clone(), lib(0), 280, 20));
                rows.push((who, lib(1), 40, 10));
            } else {
                rows.push((who, lib(l), 330, 20));
            }
        }
    }
    for i in 0..70 {
        if i < LIBRARIES - 1 {
            let who = format!("bridge-{i:02}");
            rows.push((who.clone(), lib(i), 30, 5));
            rows.push((who, lib(i + 1), 35, 0));
        } else {
            rows.push((format!("mid-{i:02}"), lib(i % LIBRARIES), 60, 10));
        }
    }
    for k in 0..300 {
        rows.push((format!("casual-{k:03}"), lib(k % LIBRARIES), (k % 2 + 1) as u64, 0));
    }
    rows
}

/// GHTorrent-style export: eight users, five projects (one a fork), commits
/// and pull requests. `setuptools` and the fork end up with fewer than three
/// contributors.
pub mod ghtorrent {
    pub const USERS: &str = "\
id,login
1,alice
2,bob
3,carol
4,dave
5,erin
6,frank
7,grace
8,heidi
";

    pub const PROJECTS: &str = "\
id,name,forked_from
1,numpy,
2,requests,
3,six,
4,setuptools,
5,numpy-fork,1
";

    pub const COMMITS: &str = "\
author_id,project_id,created_at
1,1,2018-01-02T10:00:00Z
1,1,2018-02-03T11:30:00Z
1,1,2018-03-04T09:15:00Z
1,1,2018-04-05T16:45:00Z
2,2,2018-05-06T08:00:00Z
2,2,2018-06-07T12:00:00Z
2,2,2018-07-08T13:20:00Z
2,3,2018-08-09T14:10:00Z
3,1,2018-09-10T15:00:00Z
3,5,2018-10-11T10:05:00Z
4,2,2018-11-12T11:11:00Z
5,3,2018-12-13T12:12:00Z
7,2,2019-01-14T13:13:00Z
7,3,2019-02-15T14:14:00Z
";

    pub const PULL_REQUESTS: &str = "\
user_id,project_id,merged,created_at
1,1,true,2019-03-01T09:00:00Z
5,4,true,2019-03-02T09:00:00Z
6,1,true,2019-03-03T09:00:00Z
6,1,false,2019-03-04T09:00:00Z
8,4,true,2019-03-05T09:00:00Z
8,2,false,2019-03-06T09:00:00Z
";
}
