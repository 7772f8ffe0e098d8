#include "eeschematic/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

namespace eeschematic {

namespace {

const std::array<const char*, 4> kPowerAliases = {"VDD", "VCC", "VDD!", "AVDD"};
const std::array<const char*, 5> kGroundAliases = {"GND", "VSS", "0", "GND!",
                                                   "AGND"};

std::string upper(std::string s) {
  for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct Token {
  std::string text;
  int col;  // 1-based
};

struct Card {
  std::vector<Token> tokens;
  int line;  // 1-based line of the first physical line
};

// Strips `;` comments, splits into logical cards honoring `+` continuations
// and `*` comment lines.
std::vector<Card> split_cards(const std::string& text) {
  std::vector<Card> cards;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (auto semi = raw.find(';'); semi != std::string::npos)
      raw.erase(semi);

    size_t first = raw.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (raw[first] == '*') continue;

    bool continuation = raw[first] == '+';
    if (continuation) {
      if (cards.empty())
        throw Error(ErrorCode::SyntaxError,
                    "continuation line with no preceding card", lineno,
                    int(first) + 1);
      raw[first] = ' ';
    } else {
      cards.push_back(Card{{}, lineno});
    }

    size_t i = first;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      if (i >= raw.size()) break;
      size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      cards.back().tokens.push_back(
          Token{raw.substr(start, i - start), int(start) + 1});
    }
  }
  std::erase_if(cards, [](const Card& c) { return c.tokens.empty(); });
  return cards;
}

DeviceKind kind_from_letter(char letter, const std::string& mos_model,
                            const Card& card, int model_col) {
  switch (letter) {
    case 'M': {
      std::string model = upper(mos_model);
      if (model == "NMOS") return DeviceKind::NMOS;
      if (model == "PMOS") return DeviceKind::PMOS;
      throw Error(ErrorCode::SyntaxError,
                  "unknown MOS model '" + mos_model + "' (expected NMOS or PMOS)",
                  card.line, model_col);
    }
    case 'R': return DeviceKind::RESISTOR;
    case 'C': return DeviceKind::CAPACITOR;
    case 'V': return DeviceKind::VSOURCE;
    case 'I': return DeviceKind::ISOURCE;
    default:
      throw Error(ErrorCode::SyntaxError,
                  std::string("unsupported element letter '") + letter + "'",
                  card.line, card.tokens[0].col);
  }
}

}  // namespace

const char* device_kind_name(DeviceKind k) {
  switch (k) {
    case DeviceKind::NMOS: return "NMOS";
    case DeviceKind::PMOS: return "PMOS";
    case DeviceKind::RESISTOR: return "RESISTOR";
    case DeviceKind::CAPACITOR: return "CAPACITOR";
    case DeviceKind::VSOURCE: return "VSOURCE";
    case DeviceKind::ISOURCE: return "ISOURCE";
  }
  return "?";
}

const char* terminal_role_name(TerminalRole r) {
  switch (r) {
    case TerminalRole::DRAIN: return "DRAIN";
    case TerminalRole::GATE: return "GATE";
    case TerminalRole::SOURCE: return "SOURCE";
    case TerminalRole::BULK: return "BULK";
    case TerminalRole::POS: return "POS";
    case TerminalRole::NEG: return "NEG";
    case TerminalRole::PIN: return "PIN";
  }
  return "?";
}

const char* net_class_name(NetClass c) {
  switch (c) {
    case NetClass::POWER: return "POWER";
    case NetClass::GROUND: return "GROUND";
    case NetClass::SIGNAL: return "SIGNAL";
    case NetClass::IO: return "IO";
  }
  return "?";
}

bool is_mos(DeviceKind k) {
  return k == DeviceKind::NMOS || k == DeviceKind::PMOS;
}

const std::vector<TerminalRole>& terminal_roles(DeviceKind k) {
  static const std::vector<TerminalRole> mos = {
      TerminalRole::DRAIN, TerminalRole::GATE, TerminalRole::SOURCE,
      TerminalRole::BULK};
  static const std::vector<TerminalRole> two = {TerminalRole::POS,
                                                TerminalRole::NEG};
  return is_mos(k) ? mos : two;
}

const std::string* Device::net_of(TerminalRole role) const {
  for (const auto& t : terminals)
    if (t.role == role) return &t.net;
  return nullptr;
}

const std::string* Device::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return &v;
  return nullptr;
}

const Device* Circuit::device(const std::string& name) const {
  for (const auto& d : devices)
    if (d.name == name) return &d;
  return nullptr;
}

const Net* Circuit::net(const std::string& name) const {
  for (const auto& n : nets)
    if (n.name == name) return &n;
  return nullptr;
}

Net* Circuit::net(const std::string& name) {
  for (auto& n : nets)
    if (n.name == name) return &n;
  return nullptr;
}

size_t Circuit::terminal_count() const {
  size_t n = 0;
  for (const auto& d : devices) n += d.terminals.size();
  return n;
}

bool is_power_alias(const std::string& name) {
  return std::find(kPowerAliases.begin(), kPowerAliases.end(), name) !=
         kPowerAliases.end();
}

bool is_ground_alias(const std::string& name) {
  return std::find(kGroundAliases.begin(), kGroundAliases.end(), name) !=
         kGroundAliases.end();
}

NetClass classify_name(const std::string& name, bool is_io_port) {
  bool power = is_power_alias(name);
  bool ground = is_ground_alias(name);
  if (power && ground)
    throw Error(ErrorCode::AmbiguousNet,
                "net '" + name + "' matches both power and ground aliases");
  if (power) return NetClass::POWER;
  if (ground) return NetClass::GROUND;
  return is_io_port ? NetClass::IO : NetClass::SIGNAL;
}

Circuit classify_nets(Circuit c) {
  for (auto& net : c.nets) {
    bool io = std::find(c.io_ports.begin(), c.io_ports.end(), net.name) !=
              c.io_ports.end();
    net.klass = classify_name(net.name, io);
  }
  return c;
}

Circuit parse_netlist(const std::string& text,
                      std::vector<Diagnostic>* warnings) {
  auto cards = split_cards(text);
  if (cards.empty())
    throw Error(ErrorCode::EmptyNetlist, "netlist has no element cards");

  Circuit circuit;
  circuit.source_text = text;
  std::map<std::string, Net> nets;
  auto touch_net = [&](const std::string& name, const std::string& dev,
                       TerminalRole role) {
    nets[name].name = name;
    nets[name].terminals.insert({dev, role});
  };

  bool ended = false;
  bool any_device = false;
  for (const auto& card : cards) {
    if (ended) break;
    const std::string head = upper(card.tokens[0].text);

    if (head[0] == '.') {
      if (head == ".END") {
        ended = true;
      } else if (head == ".IO") {
        for (size_t i = 1; i < card.tokens.size(); ++i) {
          std::string port = upper(card.tokens[i].text);
          if (std::find(circuit.io_ports.begin(), circuit.io_ports.end(),
                        port) == circuit.io_ports.end())
            circuit.io_ports.push_back(port);
          else if (warnings)
            warnings->push_back({Diagnostic::Severity::Warning, "duplicate-io",
                                 card.line, card.tokens[i].col,
                                 "io port '" + port + "' declared twice"});
        }
      } else {
        if (warnings)
          warnings->push_back({Diagnostic::Severity::Warning, "unknown-card",
                               card.line, card.tokens[0].col,
                               "skipping unknown dot-card '" + head + "'"});
      }
      continue;
    }

    any_device = true;
    const std::string name = head;
    const char letter = name[0];

    // Split the card body into net tokens, an optional MOS model, one
    // optional bare value and KEY=VALUE parameters.
    std::vector<Token> net_tokens;
    std::string mos_model;
    int model_col = 0;
    std::vector<std::pair<std::string, std::string>> params;
    bool params_started = false;
    for (size_t i = 1; i < card.tokens.size(); ++i) {
      const Token& tok = card.tokens[i];
      auto eq = tok.text.find('=');
      if (eq != std::string::npos) {
        std::string key = upper(tok.text.substr(0, eq));
        std::string value = tok.text.substr(eq + 1);
        if (key.empty() || value.empty())
          throw Error(ErrorCode::SyntaxError,
                      "malformed parameter '" + tok.text + "'", card.line,
                      tok.col);
        for (const auto& [k, v] : params)
          if (k == key)
            throw Error(ErrorCode::SyntaxError,
                        "duplicate parameter '" + key + "'", card.line,
                        tok.col);
        params.emplace_back(key, value);
        params_started = true;
        continue;
      }
      if (params_started)
        throw Error(ErrorCode::SyntaxError,
                    "positional token '" + tok.text + "' after parameters",
                    card.line, tok.col);
      if (letter == 'M' && mos_model.empty()) {
        std::string up = upper(tok.text);
        if (up == "NMOS" || up == "PMOS") {
          mos_model = tok.text;
          model_col = tok.col;
          continue;
        }
        net_tokens.push_back(tok);
        continue;
      }
      if (letter == 'M')
        throw Error(ErrorCode::SyntaxError,
                    "unexpected token '" + tok.text + "' after MOS model",
                    card.line, tok.col);
      if (net_tokens.size() < 2) {
        net_tokens.push_back(tok);
        continue;
      }
      // One bare value token is allowed for two-terminal devices.
      bool have_value = false;
      for (const auto& [k, v] : params) have_value |= (k == "VALUE");
      if (have_value)
        throw Error(ErrorCode::SyntaxError,
                    "unexpected extra token '" + tok.text + "'", card.line,
                    tok.col);
      params.emplace_back("VALUE", tok.text);
    }

    if (letter == 'M' && mos_model.empty())
      throw Error(ErrorCode::SyntaxError,
                  "MOS card missing NMOS/PMOS model token", card.line,
                  card.tokens[0].col);

    DeviceKind kind = kind_from_letter(letter, mos_model, card, model_col);
    const auto& roles = terminal_roles(kind);
    if (net_tokens.size() != roles.size())
      throw Error(ErrorCode::ArityError,
                  name + " has " + std::to_string(net_tokens.size()) +
                      " terminals, expected " + std::to_string(roles.size()) +
                      " for " + device_kind_name(kind),
                  card.line, card.tokens[0].col);

    Device dev;
    dev.name = name;
    dev.kind = kind;
    dev.params = std::move(params);
    for (size_t i = 0; i < roles.size(); ++i) {
      std::string net = upper(net_tokens[i].text);
      dev.terminals.push_back({roles[i], net});
      touch_net(net, name, roles[i]);
    }

    for (const auto& existing : circuit.devices)
      if (existing.name == dev.name)
        throw Error(ErrorCode::DuplicateDevice,
                    "device '" + dev.name + "' declared twice", card.line,
                    card.tokens[0].col);
    circuit.devices.push_back(std::move(dev));
  }

  if (!any_device)
    throw Error(ErrorCode::EmptyNetlist, "netlist has no element cards");

  // io ports exist as nets even when no device touches them, and each
  // non-rail port contributes a PIN terminal that wiring must reach.
  for (const auto& port : circuit.io_ports) {
    nets[port].name = port;
    if (!is_power_alias(port) && !is_ground_alias(port))
      nets[port].terminals.insert({"PORT_" + port, TerminalRole::PIN});
  }

  circuit.nets.reserve(nets.size());
  for (auto& [name, net] : nets) circuit.nets.push_back(std::move(net));
  return classify_nets(std::move(circuit));
}

std::string write_netlist(const Circuit& c) {
  std::ostringstream os;
  for (const auto& d : c.devices) {
    os << d.name;
    for (const auto& t : d.terminals) os << ' ' << t.net;
    if (d.kind == DeviceKind::NMOS) os << " NMOS";
    if (d.kind == DeviceKind::PMOS) os << " PMOS";
    for (const auto& [k, v] : d.params) {
      if (k == "VALUE")
        os << ' ' << v;
      else
        os << ' ' << k << '=' << v;
    }
    os << '\n';
  }
  if (!c.io_ports.empty()) {
    os << ".io";
    for (const auto& p : c.io_ports) os << ' ' << p;
    os << '\n';
  }
  os << ".end\n";
  return os.str();
}

std::map<std::string, std::set<std::pair<std::string, TerminalRole>>>
net_groups(const Circuit& c) {
  std::map<std::string, std::set<std::pair<std::string, TerminalRole>>> groups;
  for (const auto& net : c.nets) groups[net.name] = net.terminals;
  return groups;
}

}  // namespace eeschematic
