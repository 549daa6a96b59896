class RepresentativeLoginBean {
  addLogin(login) {
    return this.loginStore.add(login);
  }
  loadLogin(login) {
    return this.loginStore.load(login);
  }
  updateRepresentative(representative) {
    return this.representativeStore.update(representative);
  }
}
module.exports = RepresentativeLoginBean;
