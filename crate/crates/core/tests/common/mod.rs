// SPDX-License-Identifier: Apache-2.0

//! Published reference data for three level structures, shared by the
//! integration suites.

#![allow(dead_code)]

use formclass::{Form, IntPoly};
use num_bigint::BigInt;

pub struct Reference {
    pub disc: i64,
    pub level: u64,
    pub forms: &'static [(i64, i64, i64)],
    /// Reference coefficients, highest degree first, one entry per power.
    pub poly_desc: &'static [&'static str],
    /// Reference discriminant factorization `(prime, exponent)`.
    pub disc_factors: &'static [(&'static str, u32)],
    pub disc_sign: i32,
}

impl Reference {
    pub fn forms(&self) -> Vec<Form> {
        self.forms.iter().map(|&(a, b, c)| Form::new(a, b, c)).collect()
    }

    pub fn reference_poly(&self) -> IntPoly {
        let mut asc: Vec<&str> = self.poly_desc.to_vec();
        asc.reverse();
        IntPoly::from_decimal(&asc).expect("decimal coefficients")
    }

    pub fn reference_disc(&self) -> BigInt {
        let mut acc = BigInt::from(self.disc_sign);
        for &(p, e) in self.disc_factors {
            acc *= num_traits::pow(p.parse::<BigInt>().expect("prime"), e as usize);
        }
        acc
    }
}

pub const REF_D27: Reference = Reference {
    disc: -27,
    level: 2,
    forms: &[(1, 1, 7), (7, -1, 1), (9, -3, 1)],
    poly_desc: &["4", "0", "-73725696", "0", "1359124367081472", "0", "4529848324"],
    disc_factors: &[("2", 166), ("3", 21), ("5", 12), ("11", 4), ("23", 4), ("47", 4), ("383", 4)],
    disc_sign: -1,
};

pub const REF_D200: Reference = Reference {
    disc: -200,
    level: 3,
    forms: &[
        (1, 0, 50),
        (2, 0, 25),
        (17, 2, 3),
        (17, -2, 3),
        (11, -8, 6),
        (11, 8, 6),
        (50, 0, 1),
        (25, 0, 2),
        (22, -36, 17),
        (22, 36, 17),
        (25, 30, 11),
        (25, -30, 11),
    ],
    poly_desc: &[
        "1",
        "0",
        "58418434677344",
        "0",
        "1263375231780687917184",
        "0",
        "403818817043131055680665600",
        "0",
        "75730968484681312433176242483200",
        "0",
        "8361096391935757794654559611579531264",
        "0",
        "860683009678299985386510787472645392695296",
        "0",
        "9907654477954796832790654933192834007418535936",
        "0",
        "33315019088321396809058767421430556685071338700800",
        "0",
        "19239392992571915645005697694048991576255756867993600",
        "0",
        "29212993887308366869993711350192889063288845726933581824",
        "0",
        "6293984600086664567543704795614781286383616",
        "0",
        "68719476736",
    ],
    disc_factors: &[
        ("2", 1772),
        ("3", 12),
        ("5", 68),
        ("7", 120),
        ("13", 56),
        ("23", 56),
        ("29", 32),
        ("31", 8),
        ("37", 8),
        ("47", 32),
        ("53", 12),
        ("61", 8),
        ("71", 8),
        ("101", 16),
        ("149", 8),
        ("167", 8),
        ("173", 12),
        ("191", 8),
        ("197", 4),
        ("311", 4),
        ("431", 4),
        ("719", 4),
        ("983", 8),
        ("1801", 4),
        ("7369", 4),
        ("13679", 4),
        ("44449", 4),
        ("91009", 4),
        ("104399", 4),
        ("143567", 4),
        ("184609", 4),
        ("255049", 4),
        ("482021", 4),
        ("1521649", 4),
        ("3139369", 4),
        ("3857809", 4),
        ("8698681", 4),
        ("260370001", 4),
        ("272850169", 4),
        ("404455343", 4),
        ("1532509721761", 4),
        ("15630971591656081", 4),
    ],
    disc_sign: 1,
};

pub const REF_D180: Reference = Reference {
    disc: -180,
    level: 2,
    forms: &[(1, 0, 45), (23, -2, 2), (5, 0, 9), (7, 4, 7), (45, 0, 1), (23, -44, 23), (9, 0, 5), (7, -4, 7)],
    poly_desc: &[
        "1",
        "0",
        "40370081379856476160",
        "0",
        "-2294213210542224903962053836800",
        "0",
        "32594776263664443712118696387582885888000",
        "0",
        "1355997164048299289268149453587358102323200000",
        "0",
        "-4618215678434035548825390724987200304106700800000",
        "0",
        "5341315045070297685630774389596962453603745792000000",
        "0",
        "87496192498069022574637171465249162202332528640000000",
        "0",
        "7205759403792793600000000",
    ],
    disc_factors: &[
        ("2", 1296),
        ("3", 8),
        ("5", 180),
        ("11", 44),
        ("13", 28),
        ("17", 32),
        ("19", 32),
        ("31", 36),
        ("37", 8),
        ("53", 4),
        ("71", 4),
        ("73", 4),
        ("79", 4),
        ("97", 4),
        ("113", 4),
        ("131", 4),
        ("137", 4),
        ("139", 4),
        ("151", 4),
        ("157", 4),
        ("173", 4),
        ("181", 4),
        ("229", 4),
        ("4201", 4),
        ("5281", 4),
        ("6911", 4),
        ("21481", 4),
        ("39551", 4),
        ("42709", 4),
        ("112621", 4),
        ("117841", 4),
        ("1567261", 4),
        ("721400461", 4),
        ("27666986168641", 4),
        ("1459141468570561", 4),
    ],
    disc_sign: 1,
};
