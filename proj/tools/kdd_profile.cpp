#include "kdd_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string_view>

#include "mimic/data.hpp"
#include "mimic/rng.hpp"

namespace mimic::kdd {

namespace {

constexpr std::array<std::string_view, 41> kColumns = {
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land", "wrong_fragment",
    "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised", "root_shell", "su_attempted",
    "num_root", "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate", "srv_serror_rate",
    "rerror_rate", "srv_rerror_rate", "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate",
    "dst_host_count", "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};

constexpr std::array<std::string_view, 40> kServices = {
    "private", "http", "smtp", "ftp_data", "ftp", "telnet", "domain_u", "ecr_i", "eco_i", "other",
    "finger", "auth", "pop_3", "imap4", "uucp", "courier", "bgp", "whois", "iso_tsap", "csnet_ns",
    "vmnet", "ctf", "Z39_50", "gopher", "mtp", "link", "supdup", "systat", "daytime", "discard",
    "netbios_dgm", "netbios_ns", "netbios_ssn", "sql_net", "ldap", "klogin", "kshell", "exec",
    "login", "nntp"};

struct Record {
  std::array<double, 41> v{};
  std::string_view protocol = "tcp";
  std::string_view service = "http";
  std::string_view flag = "SF";
  std::string_view label = "normal";
};

enum Field : std::size_t {
  Duration = 0, SrcBytes = 4, DstBytes, Land, WrongFragment, Urgent, Hot, NumFailedLogins, LoggedIn,
  NumCompromised, RootShell, SuAttempted, NumRoot, NumFileCreations, NumShells, NumAccessFiles,
  NumOutboundCmds, IsHostLogin, IsGuestLogin, Count, SrvCount, SerrorRate, SrvSerrorRate, RerrorRate,
  SrvRerrorRate, SameSrvRate, DiffSrvRate, SrvDiffHostRate, DstHostCount, DstHostSrvCount,
  DstHostSameSrvRate, DstHostDiffSrvRate, DstHostSameSrcPortRate, DstHostSrvDiffHostRate,
  DstHostSerrorRate, DstHostSrvSerrorRate, DstHostRerrorRate, DstHostSrvRerrorRate
};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double u() { return rng_.uniform(); }
  bool chance(double p) { return rng_.uniform() < p; }
  double between(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  double integer(double lo, double hi) {
    return lo + static_cast<double>(rng_.below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  double lognormal(double mu, double sigma) { return std::round(std::exp(rng_.normal(mu, sigma))); }
  // KDD rates carry two decimals.
  double rate(double lo, double hi) { return std::round(std::clamp(between(lo, hi), 0.0, 1.0) * 100.0) / 100.0; }
  double near(double centre, double spread) {
    return std::round(std::clamp(rng_.normal(centre, spread), 0.0, 1.0) * 100.0) / 100.0;
  }
  double poisson_small(double mean) {
    // Knuth; means here are below 5.
    const double limit = std::exp(-mean);
    double k = 0.0, p = rng_.uniform();
    while (p > limit) {
      ++k;
      p *= rng_.uniform();
    }
    return k;
  }
  template <typename T, std::size_t N>
  T pick(const std::array<T, N>& items) {
    return items[rng_.below(N)];
  }
  // Index drawn from unnormalized weights.
  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = rng_.uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    return weights.size() - 1;
  }

 private:
  Rng rng_;
};

void host_profile(Record& r, double host_count, double srv_count) {
  r.v[DstHostCount] = host_count;
  r.v[DstHostSrvCount] = std::min(srv_count, 255.0);
  const double same = host_count > 0 ? std::min(1.0, r.v[DstHostSrvCount] / host_count) : 0.0;
  r.v[DstHostSameSrvRate] = std::round(same * 100.0) / 100.0;
}

void normal(Record& r, Draw& d) {
  static constexpr std::array<std::string_view, 12> services = {
      "http", "smtp", "ftp_data", "domain_u", "private", "ecr_i", "ftp", "other", "telnet",
      "pop_3", "ntp_u", "finger"};
  static constexpr std::array<double, 12> weights = {45, 12, 10, 9, 4, 3, 3, 5, 2, 1.5, 1.5, 1};
  r.service = services[d.weighted(weights)];
  if (r.service == "domain_u" || r.service == "ntp_u" || (r.service == "private" && d.chance(0.7))) {
    r.protocol = "udp";
  } else if (r.service == "ecr_i") {
    r.protocol = "icmp";
  }
  r.v[Duration] = d.chance(0.88) ? 0.0 : d.lognormal(3.0, 2.0);

  if (r.service == "http") {
    r.v[SrcBytes] = d.lognormal(5.5, 0.6);
    r.v[DstBytes] = d.lognormal(7.6, 1.3);
  } else if (r.service == "smtp") {
    r.v[SrcBytes] = d.lognormal(7.0, 1.0);
    r.v[DstBytes] = d.lognormal(5.8, 0.5);
  } else if (r.service == "ftp_data") {
    r.v[SrcBytes] = d.lognormal(7.0, 2.2);
    r.v[DstBytes] = d.chance(0.6) ? 0.0 : d.lognormal(7.5, 2.0);
  } else if (r.service == "domain_u" || r.service == "ntp_u") {
    r.v[SrcBytes] = d.lognormal(3.8, 0.3);
    r.v[DstBytes] = d.lognormal(4.6, 0.5);
  } else if (r.service == "ecr_i") {
    r.v[SrcBytes] = d.lognormal(3.5, 0.8);
  } else {
    r.v[SrcBytes] = d.lognormal(4.5, 1.8);
    r.v[DstBytes] = d.chance(0.3) ? 0.0 : d.lognormal(6.0, 2.0);
  }

  if (r.protocol == "tcp") {
    static constexpr std::array<std::string_view, 8> flags = {"SF", "REJ", "S0", "RSTO", "S1", "RSTR", "SH", "S3"};
    static constexpr std::array<double, 8> flag_weights = {93, 2, 1, 1, 1, 1, 0.5, 0.5};
    r.flag = flags[d.weighted(flag_weights)];
  }
  const bool session = r.protocol == "tcp" && r.flag == "SF";
  if (session && r.service != "private" && r.service != "other") r.v[LoggedIn] = d.chance(0.96) ? 1 : 0;
  if (r.flag == "REJ" || r.flag == "S0") r.v[SrcBytes] = r.v[DstBytes] = 0.0;

  if (r.service == "telnet" || r.service == "ftp") {
    r.v[Hot] = d.poisson_small(0.8);
    r.v[NumFailedLogins] = d.chance(0.01) ? 1 : 0;
    r.v[NumFileCreations] = d.poisson_small(0.2);
    r.v[NumAccessFiles] = d.chance(0.05) ? 1 : 0;
    r.v[RootShell] = d.chance(0.01) ? 1 : 0;
    r.v[NumRoot] = r.v[RootShell] > 0 ? d.integer(1, 5) : 0;
    r.v[IsGuestLogin] = r.service == "ftp" && d.chance(0.05) ? 1 : 0;
  } else if (d.chance(0.03)) {
    r.v[Hot] = d.integer(1, 6);
  }

  r.v[Count] = std::clamp(d.lognormal(1.5, 1.0), 1.0, 511.0);
  r.v[SrvCount] = std::clamp(std::round(r.v[Count] * d.between(0.6, 1.6)), 1.0, 511.0);
  if (r.flag == "S0") {
    r.v[SerrorRate] = d.rate(0.3, 1.0);
    r.v[SrvSerrorRate] = d.rate(0.3, 1.0);
  } else if (d.chance(0.1)) {
    r.v[SerrorRate] = d.rate(0.0, 0.1);
    r.v[SrvSerrorRate] = d.rate(0.0, 0.1);
  }
  if (r.flag == "REJ") {
    r.v[RerrorRate] = d.rate(0.3, 1.0);
    r.v[SrvRerrorRate] = d.rate(0.3, 1.0);
  } else if (d.chance(0.08)) {
    r.v[RerrorRate] = d.rate(0.0, 0.2);
    r.v[SrvRerrorRate] = d.rate(0.0, 0.2);
  }
  r.v[SameSrvRate] = d.chance(0.85) ? 1.0 : d.rate(0.3, 1.0);
  r.v[DiffSrvRate] = d.chance(0.8) ? 0.0 : d.rate(0.0, 0.3);
  r.v[SrvDiffHostRate] = d.chance(0.6) ? 0.0 : d.rate(0.0, 1.0);

  const double hosts = d.chance(0.35) ? 255.0 : d.integer(1, 255);
  host_profile(r, hosts, r.service == "http" ? (d.chance(0.6) ? 255.0 : d.integer(1, 255)) : d.integer(1, 255));
  r.v[DstHostDiffSrvRate] = d.chance(0.7) ? d.rate(0.0, 0.05) : d.rate(0.0, 0.5);
  r.v[DstHostSameSrcPortRate] = d.chance(0.5) ? d.rate(0.0, 0.05) : d.rate(0.0, 1.0);
  r.v[DstHostSrvDiffHostRate] = d.chance(0.6) ? 0.0 : d.rate(0.0, 0.3);
  r.v[DstHostSerrorRate] = r.flag == "S0" ? d.rate(0.2, 1.0) : (d.chance(0.85) ? 0.0 : d.rate(0.0, 0.2));
  r.v[DstHostSrvSerrorRate] = r.flag == "S0" ? d.rate(0.2, 1.0) : (d.chance(0.9) ? 0.0 : d.rate(0.0, 0.1));
  r.v[DstHostRerrorRate] = r.flag == "REJ" ? d.rate(0.2, 1.0) : (d.chance(0.8) ? 0.0 : d.rate(0.0, 0.3));
  r.v[DstHostSrvRerrorRate] = r.flag == "REJ" ? d.rate(0.2, 1.0) : (d.chance(0.85) ? 0.0 : d.rate(0.0, 0.2));
}

void neptune(Record& r, Draw& d) {
  r.label = "neptune";
  r.service = d.chance(0.4) ? "private" : d.pick(kServices);
  if (r.service == "domain_u" || r.service == "ecr_i" || r.service == "eco_i") r.service = "private";
  const double f = d.u();
  r.flag = f < 0.84 ? "S0" : (f < 0.97 ? "REJ" : (f < 0.99 ? "RSTO" : "SH"));
  r.v[Count] = d.integer(60, 511);
  r.v[SrvCount] = d.integer(1, 30);
  const bool syn = r.flag == "S0" || r.flag == "SH";
  r.v[SerrorRate] = syn ? d.near(1.0, 0.03) : 0.0;
  r.v[SrvSerrorRate] = syn ? d.near(1.0, 0.03) : 0.0;
  r.v[RerrorRate] = syn ? 0.0 : d.near(1.0, 0.03);
  r.v[SrvRerrorRate] = syn ? 0.0 : d.near(1.0, 0.03);
  r.v[SameSrvRate] = d.rate(0.0, 0.15);
  r.v[DiffSrvRate] = d.rate(0.04, 0.1);
  host_profile(r, 255.0, d.integer(1, 30));
  r.v[DstHostDiffSrvRate] = d.rate(0.04, 0.09);
  r.v[DstHostSerrorRate] = syn ? d.near(1.0, 0.03) : 0.0;
  r.v[DstHostSrvSerrorRate] = syn ? d.near(1.0, 0.03) : 0.0;
  r.v[DstHostRerrorRate] = syn ? 0.0 : d.near(1.0, 0.03);
  r.v[DstHostSrvRerrorRate] = syn ? 0.0 : d.near(1.0, 0.03);
}

void smurf(Record& r, Draw& d) {
  r.label = "smurf";
  r.protocol = "icmp";
  r.service = "ecr_i";
  r.v[SrcBytes] = d.chance(0.8) ? 1032.0 : 520.0;
  r.v[Count] = d.chance(0.7) ? 511.0 : d.integer(100, 511);
  r.v[SrvCount] = r.v[Count];
  r.v[SameSrvRate] = 1.0;
  host_profile(r, 255.0, 255.0);
  r.v[DstHostSameSrcPortRate] = d.chance(0.9) ? 1.0 : d.rate(0.5, 1.0);
}

void back(Record& r, Draw& d) {
  r.label = "back";
  r.service = "http";
  r.flag = d.chance(0.9) ? "SF" : "RSTR";
  r.v[Duration] = d.chance(0.9) ? 0.0 : d.integer(1, 10);
  r.v[SrcBytes] = std::round(d.between(54000, 54540));
  r.v[DstBytes] = std::round(d.between(7000, 8400));
  r.v[Hot] = 2;
  r.v[LoggedIn] = 1;
  r.v[NumCompromised] = 1;
  r.v[Count] = d.integer(1, 20);
  r.v[SrvCount] = d.integer(1, 20);
  r.v[SameSrvRate] = 1.0;
  host_profile(r, d.integer(1, 255), d.integer(1, 255));
  r.v[DstHostSameSrcPortRate] = d.rate(0.0, 0.1);
}

void teardrop(Record& r, Draw& d) {
  r.label = d.chance(0.8) ? "teardrop" : "pod";
  if (r.label == "teardrop") {
    r.protocol = "udp";
    r.service = "private";
    r.v[WrongFragment] = 3;
    r.v[SrcBytes] = 28;
  } else {
    r.protocol = "icmp";
    r.service = d.chance(0.8) ? "ecr_i" : "tim_i";
    r.v[WrongFragment] = 1;
    r.v[SrcBytes] = 1480;
  }
  r.v[Count] = d.integer(1, 100);
  r.v[SrvCount] = r.v[Count];
  r.v[SameSrvRate] = 1.0;
  host_profile(r, d.integer(1, 255), d.integer(1, 100));
  r.v[DstHostSameSrcPortRate] = d.rate(0.5, 1.0);
}

void land(Record& r, Draw& d) {
  r.label = "land";
  r.service = d.pick(kServices);
  r.flag = "S0";
  r.v[Land] = 1;
  r.v[Count] = 1;
  r.v[SrvCount] = 1;
  r.v[SerrorRate] = r.v[SrvSerrorRate] = 1.0;
  r.v[SameSrvRate] = 1.0;
  host_profile(r, d.integer(1, 10), d.integer(1, 10));
  r.v[DstHostSameSrcPortRate] = 1.0;
  r.v[DstHostSerrorRate] = r.v[DstHostSrvSerrorRate] = d.rate(0.5, 1.0);
}

void satan(Record& r, Draw& d) {
  r.label = "satan";
  r.service = d.pick(kServices);
  if (r.service == "domain_u") r.protocol = "udp";
  if (r.service == "ecr_i" || r.service == "eco_i") r.protocol = "icmp";
  if (r.protocol == "tcp") {
    const double f = d.u();
    r.flag = f < 0.55 ? "REJ" : (f < 0.75 ? "S0" : (f < 0.92 ? "SF" : "RSTO"));
  }
  if (r.flag == "SF") r.v[SrcBytes] = d.chance(0.5) ? 0.0 : d.lognormal(2.5, 1.0);
  r.v[Count] = d.integer(1, 500);
  r.v[SrvCount] = d.integer(1, 10);
  r.v[RerrorRate] = r.flag == "REJ" ? d.rate(0.6, 1.0) : d.rate(0.0, 0.6);
  r.v[SrvRerrorRate] = r.flag == "REJ" ? d.rate(0.6, 1.0) : d.rate(0.0, 0.6);
  r.v[SerrorRate] = r.flag == "S0" ? d.rate(0.4, 1.0) : d.rate(0.0, 0.1);
  r.v[SrvSerrorRate] = r.flag == "S0" ? d.rate(0.4, 1.0) : d.rate(0.0, 0.1);
  r.v[SameSrvRate] = d.rate(0.0, 0.3);
  r.v[DiffSrvRate] = d.rate(0.5, 1.0);
  host_profile(r, d.integer(1, 255), d.integer(1, 20));
  r.v[DstHostDiffSrvRate] = d.rate(0.4, 1.0);
  r.v[DstHostSameSrcPortRate] = d.rate(0.0, 1.0);
  r.v[DstHostRerrorRate] = d.rate(0.3, 1.0);
  r.v[DstHostSrvRerrorRate] = d.rate(0.3, 1.0);
}

void ipsweep(Record& r, Draw& d) {
  r.label = d.chance(0.7) ? "ipsweep" : "nmap";
  const bool icmp = r.label == "ipsweep" || d.chance(0.4);
  if (icmp) {
    r.protocol = "icmp";
    r.service = d.chance(0.85) ? "eco_i" : "ecr_i";
    r.v[SrcBytes] = d.chance(0.6) ? 8.0 : 18.0;
  } else {
    r.protocol = d.chance(0.5) ? "tcp" : "udp";
    r.service = r.protocol == "udp" ? "private" : d.pick(kServices);
    if (r.protocol == "tcp") r.flag = d.chance(0.6) ? "SH" : "S0";
  }
  r.v[Count] = d.integer(1, 3);
  r.v[SrvCount] = d.integer(1, 40);
  r.v[SameSrvRate] = 1.0;
  r.v[SrvDiffHostRate] = d.chance(0.8) ? 1.0 : d.rate(0.5, 1.0);
  host_profile(r, d.integer(1, 255), d.integer(1, 80));
  r.v[DstHostDiffSrvRate] = d.rate(0.0, 0.1);
  r.v[DstHostSameSrcPortRate] = d.rate(0.7, 1.0);
  r.v[DstHostSrvDiffHostRate] = d.rate(0.3, 1.0);
  if (r.flag == "S0" || r.flag == "SH") r.v[DstHostSerrorRate] = d.rate(0.3, 1.0);
}

void portsweep(Record& r, Draw& d) {
  r.label = "portsweep";
  r.service = d.chance(0.5) ? "private" : d.pick(kServices);
  if (r.service == "domain_u" || r.service == "ecr_i" || r.service == "eco_i") r.service = "private";
  const double f = d.u();
  r.flag = f < 0.45 ? "REJ" : (f < 0.8 ? "RSTR" : (f < 0.92 ? "RSTO" : "SF"));
  r.v[Duration] = d.chance(0.85) ? 0.0 : d.lognormal(7.0, 2.0);
  r.v[Count] = d.integer(1, 5);
  r.v[SrvCount] = d.integer(1, 5);
  r.v[RerrorRate] = d.rate(0.5, 1.0);
  r.v[SrvRerrorRate] = d.rate(0.5, 1.0);
  r.v[SameSrvRate] = d.rate(0.5, 1.0);
  r.v[SrvDiffHostRate] = d.rate(0.0, 0.5);
  host_profile(r, d.integer(1, 255), d.integer(1, 10));
  r.v[DstHostDiffSrvRate] = d.rate(0.3, 1.0);
  r.v[DstHostSameSrcPortRate] = d.rate(0.6, 1.0);
  r.v[DstHostRerrorRate] = d.rate(0.3, 1.0);
  r.v[DstHostSrvRerrorRate] = d.rate(0.6, 1.0);
}

// Remote-to-local and user-to-root sessions: ordinary-looking logins whose
// content features (hot indicators, failed logins, root shells) give them away.
void intrusion(Record& r, Draw& d) {
  static constexpr std::array<std::string_view, 9> labels = {
      "guess_passwd", "warezclient", "warezmaster", "imap", "ftp_write", "multihop", "phf",
      "buffer_overflow", "rootkit"};
  static constexpr std::array<double, 9> weights = {8, 60, 3, 2, 2, 1, 1, 5, 2};
  r.label = labels[d.weighted(weights)];
  r.v[Count] = d.integer(1, 5);
  r.v[SrvCount] = d.integer(1, 5);
  r.v[SameSrvRate] = 1.0;
  if (r.label == "guess_passwd") {
    r.service = "telnet";
    r.flag = d.chance(0.7) ? "RSTO" : "SF";
    r.v[Duration] = d.integer(1, 5);
    r.v[SrcBytes] = d.lognormal(4.8, 0.1);
    r.v[DstBytes] = d.lognormal(5.2, 0.1);
    r.v[NumFailedLogins] = 1;
  } else if (r.label == "warezclient" || r.label == "warezmaster") {
    r.service = d.chance(0.6) ? "ftp_data" : "ftp";
    r.v[Duration] = d.chance(0.5) ? 0.0 : d.lognormal(5.0, 2.0);
    r.v[SrcBytes] = d.lognormal(8.0, 2.0);
    r.v[DstBytes] = d.chance(0.7) ? 0.0 : d.lognormal(6.0, 2.0);
    r.v[LoggedIn] = 1;
    r.v[Hot] = d.chance(0.7) ? d.integer(1, 28) : 0.0;
    r.v[IsGuestLogin] = d.chance(0.35) ? 1 : 0;
  } else if (r.label == "imap" || r.label == "phf") {
    r.service = r.label == "imap" ? "imap4" : "http";
    r.flag = d.chance(0.5) ? "SF" : "SH";
    r.v[SrcBytes] = d.lognormal(5.5, 1.0);
    r.v[DstBytes] = d.lognormal(6.0, 1.5);
    r.v[NumCompromised] = d.chance(0.5) ? 1 : 0;
    r.v[RootShell] = r.label == "phf" ? 0 : (d.chance(0.3) ? 1 : 0);
  } else {
    r.service = d.chance(0.7) ? "telnet" : "ftp_data";
    r.v[Duration] = d.lognormal(4.0, 1.5);
    r.v[SrcBytes] = d.lognormal(6.5, 1.5);
    r.v[DstBytes] = d.lognormal(7.5, 1.5);
    r.v[LoggedIn] = 1;
    r.v[Hot] = d.integer(0, 6);
    r.v[RootShell] = d.chance(0.6) ? 1 : 0;
    r.v[NumFileCreations] = d.integer(0, 3);
    r.v[NumShells] = d.chance(0.3) ? 1 : 0;
    r.v[NumRoot] = r.v[RootShell] > 0 ? d.integer(1, 5) : 0;
    r.v[NumCompromised] = d.integer(0, 3);
    r.v[SuAttempted] = d.chance(0.1) ? 1 : 0;
  }
  host_profile(r, d.integer(1, 255), d.integer(1, 60));
  r.v[DstHostDiffSrvRate] = d.rate(0.0, 0.2);
  r.v[DstHostSameSrcPortRate] = d.rate(0.0, 1.0);
  r.v[DstHostSrvDiffHostRate] = d.rate(0.0, 0.2);
}

using Generator = void (*)(Record&, Draw&);

// Traffic-type mix (percent of records), from the NSL-KDD training file.
constexpr std::array<Generator, 9> kGenerators = {normal, neptune, smurf, back, teardrop, land, satan, ipsweep, portsweep};
constexpr std::array<double, 9> kMix = {53.5, 32.7, 2.1, 0.76, 0.86, 0.01, 2.9, 4.1, 2.3};
constexpr double kIntrusionShare = 0.9;

}  // namespace

std::string schema_text() {
  std::string out;
  for (const auto name : kColumns) {
    const bool categorical = name == "protocol_type" || name == "service" || name == "flag";
    out += std::string(name) + (categorical ? ":categorical\n" : ":continuous\n");
  }
  out += "label:class\nnegative:normal\n";
  return out;
}

void write_csv(std::ostream& out, std::uint64_t rows, std::uint64_t seed, bool header) {
  if (header) {
    for (const auto name : kColumns) out << name << ',';
    out << "class\n";
  }
  std::vector<double> weights(kMix.begin(), kMix.end());
  weights.push_back(kIntrusionShare);
  std::string line;
  for (std::uint64_t i = 0; i < rows; ++i) {
    Draw d(derive_seed(seed, i));
    Record r;
    const std::size_t type = d.weighted(weights);
    if (type < kGenerators.size()) {
      kGenerators[type](r, d);
    } else {
      intrusion(r, d);
    }
    line.clear();
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (c == 1) line += r.protocol;
      else if (c == 2) line += r.service;
      else if (c == 3) line += r.flag;
      else line += format_number(r.v[c]);
      line += ',';
    }
    line += r.label;
    line += '\n';
    out << line;
  }
}

}  // namespace mimic::kdd
