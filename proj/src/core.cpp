#include "batchopt/core.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "batchopt/rng.hpp"

namespace batchopt {

std::string Tau::text() const {
  // den is a power of ten by construction; emit the exact decimal.
  long long scale = den;
  int digits = 0;
  while (scale > 1) {
    scale /= 10;
    ++digits;
  }
  if (digits == 0) return std::to_string(num);
  long long whole = num / den;
  long long frac = num % den;
  std::string frac_text = std::to_string(frac);
  frac_text.insert(frac_text.begin(), static_cast<std::size_t>(digits) - frac_text.size(), '0');
  while (frac_text.size() > 1 && frac_text.back() == '0') frac_text.pop_back();
  if (frac_text == "0") return std::to_string(whole);
  return std::to_string(whole) + "." + frac_text;
}

Tau Tau::parse(const std::string& decimal_text) {
  std::size_t dot = decimal_text.find('.');
  std::string whole_part = dot == std::string::npos ? decimal_text : decimal_text.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : decimal_text.substr(dot + 1);
  if (whole_part.empty()) whole_part = "0";
  if (frac_part.size() > 9) throw ParseError("tau has more than 9 decimal places: " + decimal_text);
  for (char c : whole_part + frac_part) {
    if (c < '0' || c > '9') throw ParseError("malformed tau value: " + decimal_text);
  }
  Tau t;
  t.den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) t.den *= 10;
  t.num = std::stoll(whole_part) * t.den + (frac_part.empty() ? 0 : std::stoll(frac_part));
  if (t.num < 0 || t.num > t.den) throw ValidationError("tau must lie in [0,1]: " + decimal_text);
  // canonicalize: strip trailing zero digits
  while (t.den > 1 && t.num % 10 == 0) {
    t.num /= 10;
    t.den /= 10;
  }
  return t;
}

Tau Tau::from_double(double v) {
  if (v < 0.0 || v > 1.0) throw ValidationError("tau must lie in [0,1]");
  std::ostringstream text;
  text.precision(9);
  text << std::fixed << v;
  return parse(text.str());
}

long long Layout::total_locations() const {
  return std::accumulate(aisle_lengths.begin(), aisle_lengths.end(), 0LL);
}

namespace {

void validate_layout(const Layout& layout, Validation mode) {
  if (layout.num_aisles() < 1) throw ValidationError("layout must have at least one aisle");
  for (int b = 1; b <= layout.num_aisles(); ++b) {
    if (layout.length(b) < 1) {
      throw ValidationError("aisle " + std::to_string(b) + " has non-positive length");
    }
  }
  if (mode == Validation::Strict) {
    for (int b = 2; b <= layout.num_aisles(); ++b) {
      if (layout.length(b) > layout.length(b - 1)) {
        throw ValidationError("aisle lengths must be non-increasing (aisle " +
                              std::to_string(b) + ")");
      }
    }
  }
}

}  // namespace

Instance make_instance(Layout layout, std::vector<Item> items, std::vector<Order> orders,
                       int capacity, Tau tau, std::string name, Validation mode) {
  validate_layout(layout, mode);
  if (capacity < 1) throw ValidationError("capacity must be positive");

  Instance inst;
  inst.layout = std::move(layout);
  inst.items = std::move(items);
  inst.orders = std::move(orders);
  inst.capacity = capacity;
  inst.tau = tau;
  inst.name = std::move(name);

  inst.item_index.reserve(inst.items.size());
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const Item& it = inst.items[i];
    if (!inst.item_index.emplace(it.id, static_cast<int>(i)).second) {
      throw ValidationError("duplicate item id " + std::to_string(it.id));
    }
    if (it.aisle < 1 || it.aisle > inst.layout.num_aisles()) {
      throw ValidationError("item " + std::to_string(it.id) + " references unknown aisle " +
                            std::to_string(it.aisle));
    }
    if (it.depth < 1 || it.depth > inst.layout.length(it.aisle)) {
      throw ValidationError("item " + std::to_string(it.id) + " depth " +
                            std::to_string(it.depth) + " exceeds aisle length " +
                            std::to_string(inst.layout.length(it.aisle)));
    }
  }

  if (inst.orders.empty()) throw ValidationError("instance has no orders");
  if (mode == Validation::Strict && inst.num_orders() % inst.capacity != 0) {
    throw ValidationError("order count " + std::to_string(inst.num_orders()) +
                          " not divisible by capacity " + std::to_string(inst.capacity));
  }

  inst.orders_with_item.assign(inst.items.size(), {});
  inst.orders_in_aisle.assign(static_cast<std::size_t>(inst.layout.num_aisles()), {});
  inst.order_index.reserve(inst.orders.size());
  for (std::size_t oi = 0; oi < inst.orders.size(); ++oi) {
    Order& order = inst.orders[oi];
    if (!inst.order_index.emplace(order.id, static_cast<int>(oi)).second) {
      throw ValidationError("duplicate order id " + std::to_string(order.id));
    }
    if (order.items.empty()) {
      throw ValidationError("order " + std::to_string(order.id) + " is empty");
    }
    std::sort(order.items.begin(), order.items.end());
    if (std::adjacent_find(order.items.begin(), order.items.end()) != order.items.end()) {
      throw ValidationError("order " + std::to_string(order.id) + " lists an item twice");
    }
    std::vector<int> touched;
    for (int item_id : order.items) {
      auto found = inst.item_index.find(item_id);
      if (found == inst.item_index.end()) {
        throw ValidationError("order " + std::to_string(order.id) + " references unknown item " +
                              std::to_string(item_id));
      }
      inst.orders_with_item[static_cast<std::size_t>(found->second)].push_back(
          static_cast<int>(oi));
      touched.push_back(inst.items[static_cast<std::size_t>(found->second)].aisle);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int aisle : touched) {
      inst.orders_in_aisle[static_cast<std::size_t>(aisle) - 1].push_back(static_cast<int>(oi));
    }
  }
  return inst;
}

int Partition::num_batches() const {
  int max_batch = -1;
  for (int j : batch_of) max_batch = std::max(max_batch, j);
  return max_batch + 1;
}

void validate_partition(const Instance& instance, const Partition& partition, Validation mode) {
  if (partition.batch_of.size() != instance.orders.size()) {
    throw ValidationError("partition covers " + std::to_string(partition.batch_of.size()) +
                          " orders, instance has " + std::to_string(instance.orders.size()));
  }
  const int batches = instance.num_batches();
  std::vector<int> sizes(static_cast<std::size_t>(batches), 0);
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    int j = partition.batch_of[i];
    if (j < 0 || j >= batches) {
      throw ValidationError("order " + std::to_string(instance.orders[i].id) +
                            " assigned to out-of-range batch " + std::to_string(j + 1));
    }
    ++sizes[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < batches; ++j) {
    int expected = instance.capacity;
    if (mode == Validation::Relaxed && j == batches - 1 &&
        instance.num_orders() % instance.capacity != 0) {
      expected = instance.num_orders() % instance.capacity;
    }
    if (sizes[static_cast<std::size_t>(j)] != expected) {
      throw ValidationError("batch " + std::to_string(j + 1) + " holds " +
                            std::to_string(sizes[static_cast<std::size_t>(j)]) +
                            " orders, expected " + std::to_string(expected));
    }
  }
}

Partition canonical_partition(const Instance& instance, const Partition& partition) {
  const int batches = partition.num_batches();
  std::vector<int> smallest_id(static_cast<std::size_t>(batches),
                               std::numeric_limits<int>::max());
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    int j = partition.batch_of[i];
    smallest_id[static_cast<std::size_t>(j)] =
        std::min(smallest_id[static_cast<std::size_t>(j)], instance.orders[i].id);
  }
  std::vector<int> label(static_cast<std::size_t>(batches));
  std::iota(label.begin(), label.end(), 0);
  std::sort(label.begin(), label.end(), [&](int a, int b) {
    return smallest_id[static_cast<std::size_t>(a)] < smallest_id[static_cast<std::size_t>(b)];
  });
  std::vector<int> new_label(static_cast<std::size_t>(batches));
  for (int rank = 0; rank < batches; ++rank) {
    new_label[static_cast<std::size_t>(label[static_cast<std::size_t>(rank)])] = rank;
  }
  Partition out;
  out.batch_of.resize(partition.batch_of.size());
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    out.batch_of[i] = new_label[static_cast<std::size_t>(partition.batch_of[i])];
  }
  return out;
}

bool same_partition(const Instance& instance, const Partition& a, const Partition& b) {
  return canonical_partition(instance, a) == canonical_partition(instance, b);
}

std::vector<std::vector<int>> batch_members(const Instance& instance, const Partition& partition) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(instance.num_batches()));
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    members[static_cast<std::size_t>(partition.batch_of[i])].push_back(static_cast<int>(i));
  }
  return members;
}

Partition random_partition(const Instance& instance, std::uint64_t seed) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("random_partition requires a strict instance");
  }
  std::vector<int> sequence(static_cast<std::size_t>(instance.num_orders()));
  std::iota(sequence.begin(), sequence.end(), 0);
  auto gen = make_engine(seed);
  shuffle_fisher_yates(sequence, gen);
  Partition p;
  p.batch_of.resize(sequence.size());
  for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
    p.batch_of[static_cast<std::size_t>(sequence[pos])] =
        static_cast<int>(pos) / instance.capacity;
  }
  return p;
}

std::vector<int> OrderAisleProfile::visited_aisles() const {
  std::vector<int> out;
  out.reserve(depth_by_aisle.size());
  for (const auto& [aisle, depth] : depth_by_aisle) out.push_back(aisle);
  return out;
}

int OrderAisleProfile::max_depth(int aisle) const {
  for (const auto& [a, depth] : depth_by_aisle) {
    if (a == aisle) return depth;
    if (a > aisle) break;
  }
  return 0;
}

std::vector<OrderAisleProfile> build_profiles(const Instance& instance) {
  std::vector<OrderAisleProfile> profiles;
  profiles.reserve(instance.orders.size());
  for (const Order& order : instance.orders) {
    OrderAisleProfile profile;
    profile.order_id = order.id;
    for (int item_id : order.items) {
      const Item& item = instance.item(item_id);
      auto slot = std::find_if(profile.depth_by_aisle.begin(), profile.depth_by_aisle.end(),
                               [&](const auto& entry) { return entry.first == item.aisle; });
      if (slot == profile.depth_by_aisle.end()) {
        profile.depth_by_aisle.emplace_back(item.aisle, item.depth);
      } else {
        slot->second = std::max(slot->second, item.depth);
      }
    }
    std::sort(profile.depth_by_aisle.begin(), profile.depth_by_aisle.end());
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

std::vector<Pattern> extract_patterns(const Instance& instance) {
  const auto profiles = build_profiles(instance);
  std::map<std::vector<int>, std::vector<int>> groups;  // aisle set -> order ids
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    groups[profiles[i].visited_aisles()].push_back(instance.orders[i].id);
  }
  std::vector<Pattern> patterns;
  patterns.reserve(groups.size());
  int next_id = 0;
  for (auto& [aisles, members] : groups) {
    Pattern p;
    p.id = next_id++;
    p.aisles = aisles;
    p.member_orders = members;
    std::sort(p.member_orders.begin(), p.member_orders.end());
    patterns.push_back(std::move(p));
  }
  return patterns;
}

// ---------------------------------------------------------------------------
// file formats

namespace {

struct LineReader {
  std::istream& in;
  int line_number = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_number;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      if (line[start] == '#') continue;
      if (line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_number) + ": " + what);
  }
};

}  // namespace

Instance read_instance(std::istream& in, std::string name, Validation mode) {
  LineReader reader{in};
  std::string line;

  if (!reader.next(line)) throw ParseError("empty instance file");
  {
    std::istringstream fields(line);
    std::string magic;
    int version = 0;
    fields >> magic >> version;
    if (magic != "obopp" || version != 1) reader.fail("expected header 'obopp 1'");
  }

  Layout layout;
  if (!reader.next(line)) throw ParseError("missing layout line");
  {
    std::istringstream fields(line);
    std::string tag;
    int count = 0;
    fields >> tag >> count;
    if (tag != "layout" || count < 1) reader.fail("malformed layout line");
    layout.aisle_lengths.resize(static_cast<std::size_t>(count));
    for (int b = 0; b < count; ++b) {
      if (!(fields >> layout.aisle_lengths[static_cast<std::size_t>(b)])) {
        reader.fail("layout lists fewer than " + std::to_string(count) + " lengths");
      }
    }
  }

  int capacity = 0;
  Tau tau;
  if (!reader.next(line)) throw ParseError("missing params line");
  {
    std::istringstream fields(line);
    std::string tag, c_field, tau_field;
    fields >> tag >> c_field >> tau_field;
    if (tag != "params" || c_field.rfind("C=", 0) != 0 || tau_field.rfind("tau=", 0) != 0) {
      reader.fail("malformed params line (want 'params C=<int> tau=<decimal>')");
    }
    try {
      capacity = std::stoi(c_field.substr(2));
      tau = Tau::parse(tau_field.substr(4));
    } catch (const ParseError&) {
      reader.fail("malformed tau field '" + tau_field + "'");
    } catch (const std::exception&) {
      reader.fail("malformed capacity field '" + c_field + "'");
    }
  }

  std::vector<Item> items;
  std::vector<Order> orders;
  while (reader.next(line)) {
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "item") {
      Item item;
      if (!(fields >> item.id >> item.aisle >> item.depth)) reader.fail("malformed item line");
      items.push_back(item);
    } else if (tag == "order") {
      Order order;
      if (!(fields >> order.id)) reader.fail("malformed order line");
      int item_id = 0;
      while (fields >> item_id) order.items.push_back(item_id);
      if (order.items.empty()) reader.fail("order " + std::to_string(order.id) + " lists no items");
      orders.push_back(std::move(order));
    } else {
      reader.fail("unknown record '" + tag + "'");
    }
  }

  return make_instance(std::move(layout), std::move(items), std::move(orders), capacity, tau,
                       std::move(name), mode);
}

Instance read_instance(const std::string& path, Validation mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::string name = path;
  std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return read_instance(in, std::move(name), mode);
}

void write_instance(const Instance& instance, std::ostream& out) {
  out << "obopp 1\n";
  out << "# " << instance.name << ": " << instance.num_orders() << " orders, "
      << instance.items.size() << " items, " << instance.layout.num_aisles() << " aisles ("
      << instance.layout.total_locations() << " locations)\n";
  out << "layout " << instance.layout.num_aisles();
  for (int len : instance.layout.aisle_lengths) out << ' ' << len;
  out << '\n';
  out << "params C=" << instance.capacity << " tau=" << instance.tau.text() << '\n';
  for (const Item& item : instance.items) {
    out << "item " << item.id << ' ' << item.aisle << ' ' << item.depth << '\n';
  }
  for (const Order& order : instance.orders) {
    out << "order " << order.id;
    for (int item_id : order.items) out << ' ' << item_id;
    out << '\n';
  }
}

void write_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write instance file: " + path);
  write_instance(instance, out);
}

Partition read_partition(const Instance& instance, std::istream& in, Validation mode) {
  LineReader reader{in};
  std::string line;
  Partition p;
  p.batch_of.assign(instance.orders.size(), -1);
  int max_batch = -1;
  while (reader.next(line)) {
    std::istringstream fields(line);
    std::string tag, index_field;
    fields >> tag >> index_field;
    if (tag != "batch" || index_field.empty() || index_field.back() != ':') {
      reader.fail("expected 'batch <j>: <order_id>...'");
    }
    int j = 0;
    try {
      j = std::stoi(index_field.substr(0, index_field.size() - 1)) - 1;
    } catch (const std::exception&) {
      reader.fail("malformed batch index '" + index_field + "'");
    }
    if (j < 0) reader.fail("batch indices are 1-based");
    max_batch = std::max(max_batch, j);
    int order_id = 0;
    while (fields >> order_id) {
      auto found = instance.order_index.find(order_id);
      if (found == instance.order_index.end()) {
        reader.fail("unknown order " + std::to_string(order_id));
      }
      int& slot = p.batch_of[static_cast<std::size_t>(found->second)];
      if (slot != -1) reader.fail("order " + std::to_string(order_id) + " assigned twice");
      slot = j;
    }
  }
  for (std::size_t i = 0; i < p.batch_of.size(); ++i) {
    if (p.batch_of[i] == -1) {
      throw ValidationError("order " + std::to_string(instance.orders[i].id) +
                            " missing from partition");
    }
  }
  validate_partition(instance, p, mode);
  return p;
}

Partition read_partition(const Instance& instance, const std::string& path, Validation mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open partition file: " + path);
  return read_partition(instance, in, mode);
}

void write_partition(const Instance& instance, const Partition& partition, std::ostream& out) {
  const auto members = batch_members(instance, partition);
  for (std::size_t j = 0; j < members.size(); ++j) {
    out << "batch " << (j + 1) << ':';
    std::vector<int> ids;
    ids.reserve(members[j].size());
    for (int oi : members[j]) ids.push_back(instance.orders[static_cast<std::size_t>(oi)].id);
    std::sort(ids.begin(), ids.end());
    for (int id : ids) out << ' ' << id;
    out << '\n';
  }
}

void write_partition(const Instance& instance, const Partition& partition,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write partition file: " + path);
  write_partition(instance, partition, out);
}

}  // namespace batchopt
