#pragma once

#include <string>

#include "minap/core_groups.hpp"
#include "minap/decompose.hpp"

namespace minap {

// Line-oriented group format:
//
//   block 0     : e=Z
//   block 1..3  : e=4, H=[2]
//   block 4..   : e=geom(2,1), H=<e>
//
// One line per index or index range, contiguous from 0; an open range
// "N.." is the tail and must come last. ORDER is an integer, Z, Prufer(p)
// or geom(p,s); geom is only valid on the tail and gives block j the order
// p^(j+s). H=[...] lists the orders of a basis of H_j, H=<e> sets H_j = <e_j>.
// "#" starts a comment.
BlockGroup parse_group(const std::string& text);
std::string print_group(const BlockGroup& g);

// "3*e[5] + h[2,1] - 1/4*e[0]": e[j] is e_j, h[j,i] the i-th (1-based)
// basis element of H_j. Fractional coefficients only on Prufer blocks.
Element parse_element(const BlockGroup& g, const std::string& text);

// One element per line, or the single word H for the H part of the group.
SubgroupSpec parse_subgroup(const BlockGroup& g, const std::string& text);

std::string read_text_file(const std::string& path);

}  // namespace minap
