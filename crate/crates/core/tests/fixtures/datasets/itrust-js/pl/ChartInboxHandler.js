class ChartInboxHandler {
  addInbox(inbox) {
    return this.inboxStore.add(inbox);
  }
  assignInbox(inbox) {
    return this.inboxStore.assign(inbox);
  }
}
module.exports = ChartInboxHandler;
