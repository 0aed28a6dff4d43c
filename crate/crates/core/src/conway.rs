//! Conway polynomials for every `GF(p^m)` with `m >= 2` and `p^m <= 2^20`.
//!
//! Coefficients are listed low degree first, leading `1` omitted. Degree-one
//! fields use `x - g` with `g` the least primitive root and are computed on
//! demand instead of tabulated.

pub(crate) static CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 14, &[1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0]),
    (2, 15, &[1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 16, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 17, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 18, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    (2, 19, &[1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 20, &[1, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 2, 1, 0, 2, 0]),
    (3, 7, &[1, 0, 2, 0, 0, 0, 0]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0]),
    (3, 9, &[1, 1, 2, 2, 0, 0, 0, 0, 0]),
    (3, 10, &[2, 1, 0, 0, 2, 2, 2, 0, 0, 0]),
    (3, 11, &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0]),
    (3, 12, &[2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (5, 4, &[2, 4, 4, 0]),
    (5, 5, &[3, 4, 0, 0, 0]),
    (5, 6, &[2, 0, 1, 4, 1, 0]),
    (5, 7, &[3, 3, 0, 0, 0, 0, 0]),
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0]),
    (7, 2, &[3, 6]),
    (7, 3, &[4, 0, 6]),
    (7, 4, &[3, 4, 5, 0]),
    (7, 5, &[4, 1, 0, 0, 0]),
    (7, 6, &[3, 6, 4, 5, 1, 0]),
    (7, 7, &[4, 6, 0, 0, 0, 0, 0]),
    (11, 2, &[2, 7]),
    (11, 3, &[9, 2, 0]),
    (11, 4, &[2, 10, 8, 0]),
    (11, 5, &[9, 0, 10, 0, 0]),
    (13, 2, &[2, 12]),
    (13, 3, &[11, 2, 0]),
    (13, 4, &[2, 12, 3, 0]),
    (13, 5, &[11, 4, 0, 0, 0]),
    (17, 2, &[3, 16]),
    (17, 3, &[14, 1, 0]),
    (17, 4, &[3, 10, 7, 0]),
    (19, 2, &[2, 18]),
    (19, 3, &[17, 4, 0]),
    (19, 4, &[2, 11, 2, 0]),
    (23, 2, &[5, 21]),
    (23, 3, &[18, 2, 0]),
    (23, 4, &[5, 19, 3, 0]),
    (29, 2, &[2, 24]),
    (29, 3, &[27, 2, 0]),
    (29, 4, &[2, 15, 2, 0]),
    (31, 2, &[3, 29]),
    (31, 3, &[28, 1, 0]),
    (31, 4, &[3, 16, 3, 0]),
    (37, 2, &[2, 33]),
    (37, 3, &[35, 6, 0]),
    (41, 2, &[6, 38]),
    (41, 3, &[35, 1, 0]),
    (43, 2, &[3, 42]),
    (43, 3, &[40, 1, 0]),
    (47, 2, &[5, 45]),
    (47, 3, &[42, 3, 0]),
    (53, 2, &[2, 49]),
    (53, 3, &[51, 3, 0]),
    (59, 2, &[2, 58]),
    (59, 3, &[57, 5, 0]),
    (61, 2, &[2, 60]),
    (61, 3, &[59, 7, 0]),
    (67, 2, &[2, 63]),
    (67, 3, &[65, 6, 0]),
    (71, 2, &[7, 69]),
    (71, 3, &[64, 4, 0]),
    (73, 2, &[5, 70]),
    (73, 3, &[68, 2, 0]),
    (79, 2, &[3, 78]),
    (79, 3, &[76, 9, 0]),
    (83, 2, &[2, 82]),
    (83, 3, &[81, 3, 0]),
    (89, 2, &[3, 82]),
    (89, 3, &[86, 3, 0]),
    (97, 2, &[5, 96]),
    (97, 3, &[92, 9, 0]),
    (101, 2, &[2, 97]),
    (101, 3, &[99, 3, 0]),
    (103, 2, &[5, 102]),
    (107, 2, &[2, 103]),
    (109, 2, &[6, 108]),
    (113, 2, &[3, 101]),
    (127, 2, &[3, 126]),
    (131, 2, &[2, 127]),
    (137, 2, &[3, 131]),
    (139, 2, &[2, 138]),
    (149, 2, &[2, 145]),
    (151, 2, &[6, 149]),
    (157, 2, &[5, 152]),
    (163, 2, &[2, 159]),
    (167, 2, &[5, 166]),
    (173, 2, &[2, 169]),
    (179, 2, &[2, 172]),
    (181, 2, &[2, 177]),
    (191, 2, &[19, 190]),
    (193, 2, &[5, 192]),
    (197, 2, &[2, 192]),
    (199, 2, &[3, 193]),
    (211, 2, &[2, 207]),
    (223, 2, &[3, 221]),
    (227, 2, &[2, 220]),
    (229, 2, &[6, 228]),
    (233, 2, &[3, 232]),
    (239, 2, &[7, 237]),
    (241, 2, &[7, 238]),
    (251, 2, &[6, 242]),
    (257, 2, &[3, 251]),
    (263, 2, &[5, 261]),
    (269, 2, &[2, 268]),
    (271, 2, &[6, 269]),
    (277, 2, &[5, 274]),
    (281, 2, &[3, 280]),
    (283, 2, &[3, 282]),
    (293, 2, &[2, 292]),
    (307, 2, &[5, 306]),
    (311, 2, &[17, 310]),
    (313, 2, &[10, 310]),
    (317, 2, &[2, 313]),
    (331, 2, &[3, 326]),
    (337, 2, &[10, 332]),
    (347, 2, &[2, 343]),
    (349, 2, &[2, 348]),
    (353, 2, &[3, 348]),
    (359, 2, &[7, 358]),
    (367, 2, &[6, 366]),
    (373, 2, &[2, 369]),
    (379, 2, &[2, 374]),
    (383, 2, &[5, 382]),
    (389, 2, &[2, 379]),
    (397, 2, &[5, 392]),
    (401, 2, &[3, 396]),
    (409, 2, &[21, 404]),
    (419, 2, &[2, 418]),
    (421, 2, &[2, 417]),
    (431, 2, &[7, 430]),
    (433, 2, &[5, 432]),
    (439, 2, &[15, 436]),
    (443, 2, &[2, 437]),
    (449, 2, &[3, 444]),
    (457, 2, &[13, 454]),
    (461, 2, &[2, 460]),
    (463, 2, &[3, 461]),
    (467, 2, &[2, 463]),
    (479, 2, &[13, 474]),
    (487, 2, &[3, 485]),
    (491, 2, &[2, 487]),
    (499, 2, &[7, 493]),
    (503, 2, &[5, 498]),
    (509, 2, &[2, 508]),
    (521, 2, &[3, 515]),
    (523, 2, &[2, 522]),
    (541, 2, &[2, 537]),
    (547, 2, &[2, 543]),
    (557, 2, &[2, 553]),
    (563, 2, &[2, 559]),
    (569, 2, &[3, 568]),
    (571, 2, &[3, 570]),
    (577, 2, &[5, 572]),
    (587, 2, &[2, 583]),
    (593, 2, &[3, 592]),
    (599, 2, &[7, 598]),
    (601, 2, &[7, 598]),
    (607, 2, &[3, 606]),
    (613, 2, &[2, 609]),
    (617, 2, &[3, 612]),
    (619, 2, &[2, 618]),
    (631, 2, &[3, 629]),
    (641, 2, &[3, 635]),
    (643, 2, &[11, 641]),
    (647, 2, &[5, 645]),
    (653, 2, &[2, 649]),
    (659, 2, &[2, 655]),
    (661, 2, &[2, 660]),
    (673, 2, &[5, 672]),
    (677, 2, &[2, 672]),
    (683, 2, &[5, 682]),
    (691, 2, &[3, 686]),
    (701, 2, &[2, 697]),
    (709, 2, &[2, 705]),
    (719, 2, &[11, 715]),
    (727, 2, &[5, 725]),
    (733, 2, &[6, 732]),
    (739, 2, &[3, 734]),
    (743, 2, &[5, 742]),
    (751, 2, &[3, 749]),
    (757, 2, &[2, 753]),
    (761, 2, &[6, 758]),
    (769, 2, &[11, 765]),
    (773, 2, &[2, 772]),
    (787, 2, &[2, 786]),
    (797, 2, &[2, 793]),
    (809, 2, &[3, 799]),
    (811, 2, &[3, 806]),
    (821, 2, &[2, 816]),
    (823, 2, &[3, 821]),
    (827, 2, &[2, 821]),
    (829, 2, &[2, 828]),
    (839, 2, &[11, 838]),
    (853, 2, &[2, 852]),
    (857, 2, &[3, 850]),
    (859, 2, &[2, 858]),
    (863, 2, &[5, 862]),
    (877, 2, &[2, 873]),
    (881, 2, &[3, 869]),
    (883, 2, &[2, 879]),
    (887, 2, &[5, 885]),
    (907, 2, &[2, 903]),
    (911, 2, &[17, 909]),
    (919, 2, &[7, 910]),
    (929, 2, &[3, 917]),
    (937, 2, &[5, 934]),
    (941, 2, &[2, 940]),
    (947, 2, &[2, 943]),
    (953, 2, &[3, 947]),
    (967, 2, &[5, 965]),
    (971, 2, &[6, 970]),
    (977, 2, &[3, 972]),
    (983, 2, &[5, 981]),
    (991, 2, &[6, 989]),
    (997, 2, &[7, 995]),
    (1009, 2, &[11, 1008]),
    (1013, 2, &[3, 1006]),
    (1019, 2, &[2, 1015]),
    (1021, 2, &[10, 1020]),
];

pub(crate) fn lookup(p: u32, m: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(tp, tm, _)| *tp == p && *tm == m)
        .map(|(_, _, c)| *c)
}
