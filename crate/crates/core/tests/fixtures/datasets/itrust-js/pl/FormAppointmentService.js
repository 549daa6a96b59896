class FormAppointmentService {
  scheduleAppointment(appointment) {
    return this.appointmentStore.schedule(appointment);
  }
  removeAppointment(appointment) {
    return this.appointmentStore.remove(appointment);
  }
}
module.exports = FormAppointmentService;
