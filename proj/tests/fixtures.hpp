#pragma once

// Published DL trails for every cipher, one row per trail.
// cor_m and total are log2 of the absolute values; cor2 is log2 of Cor^2_{E_l}.

#include <cstdint>
#include <vector>

namespace fixtures {

struct Row {
    const char* cipher;
    const char* label;  // rounds and marker as printed
    int d, m, l;
    std::uint64_t din_l, din_r, dout_l, dout_r;
    std::uint64_t lin_l, lin_r, lout_l, lout_r;
    int pro;        // log2 Pr, negative
    double cor_m;   // log2 |Cor_m|
    int cor2;       // log2 Cor^2
    double total;   // log2 |Cor_E|
};

inline const std::vector<Row>& rows() {
    static const std::vector<Row> r = {
        // Simon32
        {"simon32", "11*", 5, 2, 4, 0x8, 0x22, 0x22, 0x8, 0x44, 0x10, 0x40, 0x10, -8, 0.0, -6, -14.0},
        {"simon32", "13", 5, 5, 3, 0x800, 0x2208, 0x2200, 0x800, 0x0, 0x100, 0x10, 0x45, -8, -0.63, -8, -16.63},
        {"simon32", "13*", 5, 5, 3, 0x8, 0x22, 0x22, 0x8, 0x100, 0x0, 0x40, 0x110, -8, -2.73, -4, -14.73},
        {"simon32", "13*", 5, 3, 5, 0x100, 0x440, 0x440, 0x100, 0x2208, 0x800, 0x800, 0x2200, -8, -0.83, -8, -16.83},
        {"simon32", "14", 5, 5, 4, 0x8, 0x22, 0x22, 0x8, 0x0, 0x1, 0x400, 0x1101, -8, -0.63, -10, -18.63},
        {"simon32", "14*", 4, 6, 4, 0x4, 0x11, 0x4, 0x1, 0x0, 0x8000, 0x200, 0x8880, -6, -1.88, -10, -17.88},
        {"simon32", "14*", 7, 3, 4, 0x100, 0x645, 0x44, 0x10, 0x8000, 0x2, 0x8000, 0x2002, -14, 0.0, -6, -20.0},
        {"simon32", "15*", 5, 5, 5, 0x80, 0x220, 0x220, 0x80, 0x0, 0x1000, 0x40, 0x1110, -8, -2.73, -10, -20.73},
        // Simon48
        {"simon48", "14*", 5, 4, 5, 0x8, 0x22, 0x22, 0x8, 0x220, 0x80, 0x80, 0x220, -8, -0.58, -8, -16.58},
        {"simon48", "15", 7, 4, 4, 0x80, 0x222, 0x22, 0x8, 0x20, 0x80, 0x20, 0x88, -14, -0.19, -6, -20.19},
        {"simon48", "15*", 5, 5, 5, 0x8, 0x32, 0x22, 0x8, 0x1, 0x0, 0x40000, 0x110001, -8, -0.66, -10, -18.66},
        {"simon48", "15*", 7, 3, 5, 0x800, 0x2220, 0x220, 0x80, 0x11, 0x4, 0x4, 0x11, -14, 0.0, -8, -22.0},
        {"simon48", "16", 7, 5, 4, 0x400, 0x1110, 0x110, 0x40, 0x8, 0x0, 0x800008, 0x200000, -14, -0.66, -8, -22.66},
        {"simon48", "16*", 7, 5, 4, 0x400, 0x1110, 0x110, 0x40, 0x8, 0x20, 0x8, 0x22, -14, -1.30, -6, -21.30},
        {"simon48", "16*", 5, 6, 5, 0x8, 0x32, 0x22, 0x8, 0x4, 0x0, 0x100000, 0x440004, -8, -3.01, -10, -21.01},
        {"simon48", "17", 7, 6, 4, 0x80, 0x222, 0x22, 0x8, 0x0, 0x1, 0x40000, 0x110001, -14, -0.66, -10, -24.66},
        {"simon48", "17*", 6, 6, 5, 0x200, 0x888, 0x20, 0x8, 0x4, 0x0, 0x100000, 0x440004, -12, -2.08, -10, -24.08},
        {"simon48", "17*", 7, 4, 6, 0x80, 0x222, 0x22, 0x8, 0x400000, 0x1, 0x40000, 0x110001, -14, 0.0, -12, -26.0},
        {"simon48", "18*", 7, 4, 7, 0x80, 0x222, 0x22, 0x8, 0x220, 0x80, 0x8, 0x222, -14, -0.58, -14, -28.58},
        // Simon64
        {"simon64", "16*", 5, 6, 5, 0x20, 0x88, 0x88, 0x20, 0x4, 0x0, 0x1000000, 0x4400004, -8, -0.59, -10, -18.59},
        {"simon64", "20", 7, 7, 6, 0x200, 0x888, 0x88, 0x20, 0x0, 0x4, 0x1000001, 0x4400004, -14, -0.58, -20, -34.58},
        {"simon64", "20*", 8, 6, 6, 0x80, 0x8322, 0x80, 0x22, 0x80, 0x200, 0x8, 0x222, -18, -2.46, -12, -32.46},
        {"simon64", "20*", 9, 6, 5, 0x800, 0x83220, 0x2220, 0x800, 0x200, 0x0, 0x8, 0x222, -20, -3.16, -10, -33.16},
        {"simon64", "21*", 9, 7, 5, 0x800, 0x83220, 0x2220, 0x800, 0x800, 0x0, 0x20, 0x888, -20, -6.39, -10, -36.39},
        {"simon64", "21*", 8, 5, 8, 0x800, 0x2220, 0x800, 0x220, 0x20, 0x880, 0x20, 0x888, -18, -0.91, -18, -36.91},
        // Simon96
        {"simon96", "23*", 9, 5, 9, 0x10000, 0x44400, 0x44400, 0x10000, 0x222, 0x8, 0x8, 0x222, -20, 0.0, -20, -40.0},
        {"simon96", "25", 10, 6, 9, 0x11100, 0x40400, 0x11100, 0x4000, 0x222, 0x8, 0x8, 0x222, -26, -0.66, -20, -46.66},
        {"simon96", "25*", 9, 8, 8, 0x800, 0x2220, 0x2220, 0x800, 0x20, 0x880, 0x20, 0x888, -20, -6.41, -18, -44.41},
        {"simon96", "26", 11, 6, 9, 0x101000, 0x440400, 0x44400, 0x10000, 0x888, 0x20, 0x20, 0x888, -30, -0.66, -20, -50.66},
        {"simon96", "26*", 9, 9, 8, 0x80000, 0x222000, 0x222000, 0x80000, 0x1000, 0x4000, 0x1010, 0x4044, -20, -8.16, -22, -50.16},
        // Simon128
        {"simon128", "31", 10, 9, 12, 0x22200000, 0x80800000, 0x22200000, 0x8000000, 0x10000, 0x440000, 0x100, 0x4044401, -26, -0.70, -36, -62.70},
        {"simon128", "31*", 13, 9, 9, 0x800000, 0x2220200, 0x22200, 0x8000, 0x888, 0x20, 0x20, 0x888, -38, -3.73, -20, -61.73},
        {"simon128", "32", 11, 9, 12, 0x4040000, 0x11010000, 0x1110000, 0x400000, 0x800, 0x22000, 0x8, 0x20222, -30, -0.70, -36, -66.70},
        {"simon128", "32*", 13, 10, 9, 0x8000000, 0x22202000, 0x222000, 0x80000, 0x4400, 0x1000, 0x1010, 0x4044, -38, -3.61, -24, -65.61},
        {"simon128", "32*", 11, 8, 13, 0x4040000, 0x11010000, 0x1110000, 0x400000, 0x22200, 0x800, 0x8, 0x20222, -30, -0.22, -38, -68.22},
        // Simeck32
        {"simeck32", "12*", 5, 2, 5, 0x10, 0x28, 0x28, 0x10, 0x5, 0x2, 0x2, 0x5, -8, 0.0, -8, -16.0},
        {"simeck32", "14", 5, 5, 4, 0x2000, 0x7400, 0x400, 0x0, 0x100, 0x200, 0x100, 0x288, -10, -0.63, -6, -16.63},
        {"simeck32", "14*", 5, 6, 3, 0x100, 0x2a0, 0x20, 0x0, 0x10, 0x0, 0x8, 0x14, -10, -1.99, -4, -15.99},
        {"simeck32", "14*", 6, 3, 5, 0x4, 0x800a, 0x1, 0x8000, 0x5100, 0x2000, 0x2000, 0x5000, -12, 0.0, -8, -20.0},
        // Simeck48
        {"simeck48", "17", 6, 6, 5, 0x80, 0x140, 0x200, 0x140, 0x10, 0x0, 0x2, 0x15, -12, -0.37, -10, -22.37},
        {"simeck48", "17*", 6, 6, 5, 0x400, 0xa80, 0x100, 0x80, 0x28, 0x10, 0x10, 0x28, -12, -2.07, -8, -22.07},
        {"simeck48", "17*", 5, 7, 5, 0x800, 0x1500, 0x100, 0x0, 0x10, 0x0, 0x2, 0x15, -10, -1.44, -10, -21.44},
        {"simeck48", "17*", 8, 4, 5, 0x8000, 0x15000, 0x8000, 0x5000, 0x500, 0x200, 0x200, 0x500, -18, 0.0, -8, -26.0},
        {"simeck48", "18", 6, 6, 6, 0x80, 0x140, 0x200, 0x140, 0x10, 0x20, 0x4, 0x2a, -12, -0.75, -12, -24.75},
        {"simeck48", "18*", 8, 7, 3, 0x80, 0x150, 0x80, 0x50, 0x8, 0x0, 0x4, 0xa, -18, -2.06, -4, -24.06},
        {"simeck48", "18*", 7, 4, 7, 0x8000, 0x14000, 0x54000, 0x20000, 0x2800, 0x1000, 0x400, 0x2a00, -14, 0.0, -14, -28.0},
        {"simeck48", "19*", 8, 4, 7, 0x8000, 0x15000, 0x8000, 0x5000, 0x500, 0x200, 0x80, 0x540, -18, 0.0, -14, -32.0},
        // Simeck64
        {"simeck64", "22", 7, 7, 8, 0x2000, 0x5400, 0x1400, 0x800, 0x40, 0x280, 0x40, 0x2a0, -14, -0.44, -18, -32.44},
        {"simeck64", "22*", 4, 9, 9, 0x100, 0x280, 0x100, 0x80, 0x40, 0x0, 0x0, 0x44, -6, -1.04, -22, -29.04},
        {"simeck64", "23", 7, 7, 9, 0x2000, 0x5400, 0x1400, 0x800, 0x100, 0x0, 0x0, 0x110, -14, -0.13, -22, -36.13},
        {"simeck64", "23*", 4, 10, 9, 0x100, 0x280, 0x100, 0x80, 0x40, 0x0, 0x0, 0x44, -6, -4.44, -22, -32.44},
        {"simeck64", "23*", 4, 9, 10, 0x100, 0x280, 0x100, 0x80, 0x20, 0x40, 0x0, 0x44, -6, -3.04, -24, -33.04},
        {"simeck64", "24", 7, 7, 10, 0x2000, 0x5400, 0x1400, 0x800, 0x100, 0x200, 0x0, 0x220, -14, -0.13, -24, -38.13},
        {"simeck64", "24*", 4, 9, 11, 0x100, 0x280, 0x100, 0x80, 0x40, 0x0, 0x20, 0x54, -6, -1.04, -28, -35.04},
        {"simeck64", "24*", 11, 6, 7, 0x0, 0x880, 0x28, 0x100, 0x50, 0x20, 0x8, 0x54, -26, 0.0, -14, -40.0},
        {"simeck64", "25", 7, 7, 11, 0x2000, 0x5400, 0x1400, 0x800, 0x110, 0x0, 0x80, 0x140, -14, -1.04, -26, -41.04},
        {"simeck64", "25*", 11, 7, 7, 0x0, 0x880, 0x280, 0x100, 0x28, 0x10, 0x4, 0x2a, -26, -1.04, -14, -41.04},
        {"simeck64", "25*", 4, 10, 11, 0x10, 0x28, 0x10, 0x8, 0x0, 0x4, 0x4, 0x2, -6, -1.04, -32, -39.04},
    };
    return r;
}

}  // namespace fixtures
