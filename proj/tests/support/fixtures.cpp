#include "fixtures.hpp"

namespace pltgen::testing {

std::string fixture_path(const std::string& name) {
  return std::string(PLTGEN_FIXTURE_DIR) + "/" + name;
}

OnlineShop load_online_shop() {
  auto fm = parse_feature_model(read_file(fixture_path("online_shop.fm.json")));
  auto sm = parse_state_machine(read_file(fixture_path("online_shop.sm150.json")));
  auto map = parse_mapping(read_file(fixture_path("online_shop.map.json")), fm, sm);
  return {std::move(fm), std::move(sm), std::move(map)};
}

SuiteInput load_top_down_reference() {
  return parse_suite_input(read_file(fixture_path("online_shop.suite.top_down.json")));
}

SuiteInput load_bottom_up_reference() {
  return parse_suite_input(read_file(fixture_path("online_shop.suite.bottom_up.json")));
}

Configuration variant_i() {
  return {{"OnlineShop", "Catalog", "Payment", "CreditCard", "Security", "High"}};
}

Configuration variant_ii() {
  return {{"OnlineShop", "Catalog", "Payment", "BankAccount", "ECoins", "Security",
           "Low", "Search"}};
}

Configuration all_but_low() {
  return {{"OnlineShop", "Catalog", "Payment", "BankAccount", "ECoins", "CreditCard",
           "Security", "High", "Search"}};
}

}  // namespace pltgen::testing
