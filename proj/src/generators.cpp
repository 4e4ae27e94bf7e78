#include "polytower/generators.hpp"

#include <random>

namespace polytower::gen {

std::vector<VertexName> vertex_names(int count) {
  std::vector<VertexName> names;
  for (int i = 0; i < count; ++i) {
    names.emplace_back(count <= 26 ? std::string(1, static_cast<char>('a' + i)) : "v" + std::to_string(i));
  }
  return names;
}

ComplexPtr simplex(int d) {
  if (d < 0) throw Error(ErrorCode::DomainError, "simplex dimension must be non-negative");
  return Complex::from_simplices({vertex_names(d + 1)});
}

ComplexPtr sphere(int d) {
  if (d < 0) throw Error(ErrorCode::DomainError, "sphere dimension must be non-negative");
  const auto names = vertex_names(d + 2);
  std::vector<std::vector<VertexName>> faces;
  for (std::size_t skip = 0; skip < names.size(); ++skip) {
    std::vector<VertexName> face;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i != skip) face.push_back(names[i]);
    }
    faces.push_back(face);
  }
  return Complex::from_simplices(faces);
}

ComplexPtr rp2() {
  return Complex::from_atoms({{"1", "2", "3"}, {"1", "3", "4"}, {"1", "4", "5"}, {"1", "5", "6"}, {"1", "6", "2"},
                              {"2", "3", "5"}, {"3", "4", "6"}, {"4", "5", "2"}, {"5", "6", "3"}, {"6", "2", "4"}});
}

ComplexPtr cylinder() {
  std::vector<std::vector<std::string>> faces;
  const char* rings[] = {"b", "m", "t"};
  for (int r = 0; r < 2; ++r) {
    const std::string lo = rings[r];
    const std::string hi = rings[r + 1];
    for (int i = 1; i <= 3; ++i) {
      const std::string a = std::to_string(i);
      const std::string b = std::to_string(i % 3 + 1);
      faces.push_back({lo + a, lo + b, hi + b});
      faces.push_back({lo + a, hi + a, hi + b});
    }
  }
  return Complex::from_atoms(faces);
}

ComplexPtr interval() { return Complex::from_atoms({{"u", "v"}}); }

QSMap cylinder_map() {
  const VertexName u("u");
  const VertexName v("v");
  std::map<VertexName, VertexName> images;
  for (int i = 1; i <= 3; ++i) {
    const std::string s = std::to_string(i);
    images[VertexName("b" + s)] = VertexName::list({u});
    images[VertexName("m" + s)] = VertexName::list({u, v});
    images[VertexName("t" + s)] = VertexName::list({v});
  }
  return QSMap::from_names(cylinder(), interval(), images);
}

QSMap random_blowup(std::uint64_t seed, const ComplexPtr& base, int max_copies, bool join, double drop) {
  if (max_copies < 1) throw Error(ErrorCode::DomainError, "max_copies must be positive");
  std::mt19937_64 rng(seed);
  const auto sub = barycentric_subdivide(base);
  std::uniform_int_distribution<int> copies_of(1, max_copies);
  std::vector<int> copies(sub->vertex_count());
  for (auto& c : copies) c = copies_of(rng);
  auto copy_name = [](VertexId x, int i) { return VertexName("w" + std::to_string(x) + "_" + std::to_string(i)); };

  std::bernoulli_distribution dropped(drop);
  std::vector<std::vector<VertexName>> faces;
  for (const auto& chain : sub->maximal()) {
    if (drop > 0 && dropped(rng)) {
      // Keep a single vertex of the chain only.
      std::vector<VertexName> face;
      face.push_back(copy_name(chain.front(), 0));
      faces.push_back(face);
      continue;
    }
    if (join) {
      std::vector<VertexName> face;
      for (auto x : chain) {
        for (int i = 0; i < copies[x]; ++i) face.push_back(copy_name(x, i));
      }
      faces.push_back(face);
      continue;
    }
    const int repeats = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int r = 0; r < repeats; ++r) {
      std::vector<VertexName> face;
      for (auto x : chain) face.push_back(copy_name(x, std::uniform_int_distribution<int>(0, copies[x] - 1)(rng)));
      faces.push_back(face);
    }
  }
  // Unused copies become isolated vertices over their original.
  std::vector<VertexName> extra;
  for (VertexId x = 0; x < sub->vertex_count(); ++x) {
    for (int i = 0; i < copies[x]; ++i) extra.push_back(copy_name(x, i));
  }
  auto source = Complex::from_simplices(faces, extra);
  std::vector<VertexId> images(source->vertex_count());
  for (VertexId v = 0; v < source->vertex_count(); ++v) {
    const std::string& atom = source->name(v).atom();
    images[v] = static_cast<VertexId>(std::stoul(atom.substr(1, atom.find('_') - 1)));
  }
  return QSMap::check(VertexMap(source, sub, std::move(images)));
}

}  // namespace polytower::gen
