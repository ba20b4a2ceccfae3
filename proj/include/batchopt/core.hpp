#ifndef BATCHOPT_CORE_HPP_
#define BATCHOPT_CORE_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace batchopt {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict mode keeps the divisibility equality |I| mod C == 0 and
// length-descending aisles; relaxed tolerates one short batch and an
// arbitrary aisle order.
enum class Validation { Strict, Relaxed };

// Packing weight tau as an exact decimal fraction (den a power of ten),
// so combined-cost comparisons can be done in integers (see scaled_cost
// in eval.hpp).
struct Tau {
  long long num = 4;
  long long den = 10;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string text() const;

  static Tau parse(const std::string& decimal_text);
  static Tau from_double(double v);

  friend bool operator==(const Tau& a, const Tau& b) {
    return a.num * b.den == b.num * a.den;
  }
};

struct Layout {
  std::vector<int> aisle_lengths;  // aisle b (1-based) has length aisle_lengths[b-1]
  int width = 0;
  std::string depot_side = "left";
  std::string packing_side = "right";

  int num_aisles() const { return static_cast<int>(aisle_lengths.size()); }
  int length(int aisle) const { return aisle_lengths[static_cast<std::size_t>(aisle) - 1]; }
  long long total_locations() const;

  friend bool operator==(const Layout& a, const Layout& b) {
    return a.aisle_lengths == b.aisle_lengths && a.width == b.width &&
           a.depot_side == b.depot_side && a.packing_side == b.packing_side;
  }
};

struct Item {
  int id = 0;
  int aisle = 0;  // 1-based
  int depth = 0;  // 1..length(aisle)

  friend bool operator==(const Item& a, const Item& b) {
    return a.id == b.id && a.aisle == b.aisle && a.depth == b.depth;
  }
};

struct Order {
  int id = 0;
  std::vector<int> items;  // sorted unique item ids

  friend bool operator==(const Order& a, const Order& b) {
    return a.id == b.id && a.items == b.items;
  }
};

struct Instance {
  Layout layout;
  std::vector<Item> items;
  std::vector<Order> orders;
  int capacity = 1;
  Tau tau;
  std::string name;

  // derived indexes, filled by make_instance
  std::unordered_map<int, int> item_index;            // item id -> position in items
  std::unordered_map<int, int> order_index;           // order id -> position in orders
  std::vector<std::vector<int>> orders_with_item;     // aligned with items (I_k)
  std::vector<std::vector<int>> orders_in_aisle;      // [b-1] -> order positions (I_b)

  int num_orders() const { return static_cast<int>(orders.size()); }
  int num_batches() const {
    return (num_orders() + capacity - 1) / capacity;
  }
  const Item& item(int item_id) const { return items[static_cast<std::size_t>(item_index.at(item_id))]; }

  // Structural equality; the name is a label and not serialized.
  friend bool operator==(const Instance& a, const Instance& b) {
    return a.layout == b.layout && a.items == b.items && a.orders == b.orders &&
           a.capacity == b.capacity && a.tau == b.tau;
  }
};

Instance make_instance(Layout layout, std::vector<Item> items, std::vector<Order> orders,
                       int capacity, Tau tau, std::string name,
                       Validation mode = Validation::Strict);

// Assignment of every order (by position in instance.orders) to a batch
// index in 0..|J|-1.
struct Partition {
  std::vector<int> batch_of;

  int num_batches() const;
  friend bool operator==(const Partition& a, const Partition& b) { return a.batch_of == b.batch_of; }
};

void validate_partition(const Instance& instance, const Partition& partition,
                        Validation mode = Validation::Strict);

// Relabels batches by smallest contained order id, so label-permuted
// partitions compare equal after canonicalization.
Partition canonical_partition(const Instance& instance, const Partition& partition);
bool same_partition(const Instance& instance, const Partition& a, const Partition& b);

// Members of each batch as order positions, ascending.
std::vector<std::vector<int>> batch_members(const Instance& instance, const Partition& partition);

// Fisher-Yates shuffle of the order list chunked into consecutive blocks
// of C; uniform over batchings up to labeling.
Partition random_partition(const Instance& instance, std::uint64_t seed);

struct OrderAisleProfile {
  int order_id = 0;
  std::vector<std::pair<int, int>> depth_by_aisle;  // (aisle, r_ib), ascending aisle

  std::vector<int> visited_aisles() const;
  int max_depth(int aisle) const;  // 0 when the order skips the aisle
  int num_visited() const { return static_cast<int>(depth_by_aisle.size()); }
};

std::vector<OrderAisleProfile> build_profiles(const Instance& instance);

// Orders grouped by exact equality of their visited-aisle sets.
struct Pattern {
  int id = 0;
  std::vector<int> aisles;         // ascending
  std::vector<int> member_orders;  // order ids, ascending
};

std::vector<Pattern> extract_patterns(const Instance& instance);

Instance read_instance(std::istream& in, std::string name, Validation mode = Validation::Strict);
Instance read_instance(const std::string& path, Validation mode = Validation::Strict);
void write_instance(const Instance& instance, std::ostream& out);
void write_instance(const Instance& instance, const std::string& path);

Partition read_partition(const Instance& instance, std::istream& in,
                         Validation mode = Validation::Strict);
Partition read_partition(const Instance& instance, const std::string& path,
                         Validation mode = Validation::Strict);
void write_partition(const Instance& instance, const Partition& partition, std::ostream& out);
void write_partition(const Instance& instance, const Partition& partition, const std::string& path);

}  // namespace batchopt

#endif  // BATCHOPT_CORE_HPP_
