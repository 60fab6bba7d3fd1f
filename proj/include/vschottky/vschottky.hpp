#pragma once

#include <vschottky/b3.hpp>
#include <vschottky/basic_groups.hpp>
#include <vschottky/combination.hpp>
#include <vschottky/cyclic_case.hpp>
#include <vschottky/group_algebra.hpp>
#include <vschottky/limitset.hpp>
#include <vschottky/moebius.hpp>
#include <vschottky/scene.hpp>
#include <vschottky/schottky.hpp>
#include <vschottky/sphere.hpp>
#include <vschottky/words.hpp>
