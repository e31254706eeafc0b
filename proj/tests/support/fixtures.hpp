#pragma once

#include <string>

#include "pltgen/io.hpp"

namespace pltgen::testing {

std::string fixture_path(const std::string& name);

struct OnlineShop {
  FeatureModel fm;
  StateMachine sm150;
  MappingModel map;
};

OnlineShop load_online_shop();
SuiteInput load_top_down_reference();
SuiteInput load_bottom_up_reference();

Configuration variant_i();    // CreditCard + High
Configuration variant_ii();   // BankAccount + ECoins + Low + Search
Configuration all_but_low();  // the bottom-up reference product

}  // namespace pltgen::testing
