#ifndef ITEMDEV_ITEMDEV_HPP
#define ITEMDEV_ITEMDEV_HPP

#include "itemdev/dataset.hpp"
#include "itemdev/descriptive.hpp"
#include "itemdev/diagnostics.hpp"
#include "itemdev/distributions.hpp"
#include "itemdev/index.hpp"
#include "itemdev/parallel.hpp"
#include "itemdev/random.hpp"
#include "itemdev/report.hpp"
#include "itemdev/sample.hpp"
#include "itemdev/special.hpp"

#endif  // ITEMDEV_ITEMDEV_HPP
